#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ensemble.hpp"

namespace s6v {

// Binary dump, version 1 (all integers little-endian):
//   bytes 0..7   magic "S6VENS" 0x00 0x01
//   bytes 8..11  x (uint32)
//   bytes 12..15 y (uint32)
//   h plane: (x+1)*y bits, rows j = 1..y, columns i = 1..x+1
//   v plane: x*(y+1) bits, rows j = 1..y+1, columns i = 1..x
// Each plane is packed LSB-first into bytes and padded to a byte boundary.
inline constexpr std::array<char, 8> kEnsembleMagic = {'S', '6', 'V', 'E', 'N', 'S', '\0', '\x01'};

namespace detail {

inline void put_u32(std::ostream& os, std::uint32_t v)
{
    for (int k = 0; k < 4; ++k)
        os.put(static_cast<char>((v >> (8 * k)) & 0xff));
}

inline std::uint32_t get_u32(std::istream& is)
{
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) {
        const int c = is.get();
        if (c == std::char_traits<char>::eof())
            throw std::runtime_error("ensemble dump: truncated header");
        v |= static_cast<std::uint32_t>(c & 0xff) << (8 * k);
    }
    return v;
}

inline void put_plane(std::ostream& os, const BitPlane& p)
{
    std::uint8_t byte = 0;
    int fill = 0;
    for (int r = 0; r < p.height(); ++r)
        for (int c = 0; c < p.width(); ++c) {
            byte |= static_cast<std::uint8_t>(p.get(c, r)) << fill;
            if (++fill == 8) {
                os.put(static_cast<char>(byte));
                byte = 0;
                fill = 0;
            }
        }
    if (fill)
        os.put(static_cast<char>(byte));
}

inline void get_plane(std::istream& is, BitPlane& p)
{
    int fill = 8;
    int byte = 0;
    for (int r = 0; r < p.height(); ++r)
        for (int c = 0; c < p.width(); ++c) {
            if (fill == 8) {
                byte = is.get();
                if (byte == std::char_traits<char>::eof())
                    throw std::runtime_error("ensemble dump: truncated plane");
                fill = 0;
            }
            p.set(c, r, (byte >> fill++) & 1);
        }
}

}  // namespace detail

inline void write_binary(std::ostream& os, const PathEnsemble& ens)
{
    os.write(kEnsembleMagic.data(), kEnsembleMagic.size());
    detail::put_u32(os, static_cast<std::uint32_t>(ens.dims().x));
    detail::put_u32(os, static_cast<std::uint32_t>(ens.dims().y));
    detail::put_plane(os, ens.h_plane());
    detail::put_plane(os, ens.v_plane());
}

inline PathEnsemble read_binary(std::istream& is)
{
    std::array<char, 8> magic{};
    is.read(magic.data(), magic.size());
    if (!is || magic != kEnsembleMagic)
        throw std::runtime_error("ensemble dump: bad magic or unsupported version");
    const auto x = detail::get_u32(is);
    const auto y = detail::get_u32(is);
    PathEnsemble ens(Dims{static_cast<int>(x), static_cast<int>(y)});
    detail::get_plane(is, ens.h_plane());
    detail::get_plane(is, ens.v_plane());
    return ens;
}

/// One character per vertex, top row first:
///   '.' empty   '|' vertical through   'L' vertical turns east
///   '-' horizontal through   'J' horizontal turns north   '+' two arrows
///   '?' non-conserving vertex
inline char vertex_glyph(std::optional<VertexConfig> c)
{
    if (!c)
        return '?';
    switch (*c) {
    case VertexConfig::Empty: return '.';
    case VertexConfig::VerticalThrough: return '|';
    case VertexConfig::VerticalTurn: return 'L';
    case VertexConfig::HorizontalThrough: return '-';
    case VertexConfig::HorizontalTurn: return 'J';
    case VertexConfig::Full: return '+';
    }
    return '?';
}

inline void write_text_grid(std::ostream& os, const PathEnsemble& ens)
{
    const Dims d = ens.dims();
    os << "# s6v-grid v1 " << d.x << ' ' << d.y << '\n';
    for (int j = d.y; j >= 1; --j) {
        for (int i = 1; i <= d.x; ++i)
            os << vertex_glyph(ens.config(i, j));
        os << '\n';
    }
}

inline std::string to_text_grid(const PathEnsemble& ens)
{
    std::ostringstream os;
    write_text_grid(os, ens);
    return os.str();
}

}  // namespace s6v
