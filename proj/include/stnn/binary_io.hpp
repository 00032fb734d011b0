#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "stnn/error.hpp"

// Little-endian primitives shared by the trip cache and the model file.
namespace stnn::binio {

template <typename UInt>
void write_uint(std::ostream& out, UInt value)
{
    std::array<char, sizeof(UInt)> bytes{};
    for (std::size_t i = 0; i < sizeof(UInt); ++i) {
        bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
    }
    out.write(bytes.data(), bytes.size());
}

inline void write_f64(std::ostream& out, double value)
{
    write_uint<std::uint64_t>(out, std::bit_cast<std::uint64_t>(value));
}

inline void write_magic(std::ostream& out, std::string_view magic)
{
    out.write(magic.data(), static_cast<std::streamsize>(magic.size()));
}

class Reader {
public:
    Reader(std::istream& in, std::string context) : in_(in), context_(std::move(context)) {}

    template <typename UInt>
    UInt read_uint()
    {
        std::array<char, sizeof(UInt)> bytes{};
        read_exact(bytes.data(), bytes.size());
        UInt value = 0;
        for (std::size_t i = 0; i < sizeof(UInt); ++i) {
            value |= static_cast<UInt>(static_cast<unsigned char>(bytes[i])) << (8 * i);
        }
        return value;
    }

    double read_f64() { return std::bit_cast<double>(read_uint<std::uint64_t>()); }

    std::string read_bytes(std::size_t count)
    {
        std::string buffer(count, '\0');
        read_exact(buffer.data(), count);
        return buffer;
    }

    void expect_magic(std::string_view magic)
    {
        const auto found = read_bytes(magic.size());
        if (found != magic) {
            throw FormatError(context_ + ": bad magic bytes (expected \"" + std::string(magic) + "\")");
        }
    }

    void expect_end()
    {
        if (in_.peek() != std::char_traits<char>::eof()) {
            throw FormatError(context_ + ": unexpected trailing bytes");
        }
    }

    const std::string& context() const { return context_; }

private:
    void read_exact(char* dst, std::size_t count)
    {
        in_.read(dst, static_cast<std::streamsize>(count));
        if (static_cast<std::size_t>(in_.gcount()) != count) {
            throw FormatError(context_ + ": truncated input");
        }
    }

    std::istream& in_;
    std::string context_;
};

}  // namespace stnn::binio
