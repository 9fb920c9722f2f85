#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>

#include "frontlearn/errors.hpp"

// Little-endian binary streams shared by the snapshot, trajectory, model
// and feature-table formats.

namespace frontlearn::io {

template <class T>
T to_little(T v) noexcept {
    static_assert(std::is_trivially_copyable_v<T>);
    if constexpr (std::endian::native == std::endian::big) {
        std::array<unsigned char, sizeof(T)> b;
        std::memcpy(b.data(), &v, sizeof(T));
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
        std::memcpy(&v, b.data(), sizeof(T));
    }
    return v;
}

class BinaryWriter {
public:
    explicit BinaryWriter(const std::filesystem::path& path) : out_(path, std::ios::binary | std::ios::trunc) {
        if (!out_) throw Error("cannot open " + path.string() + " for writing");
    }

    void magic(std::string_view m) { out_.write(m.data(), static_cast<std::streamsize>(m.size())); }

    template <class T>
    void put(T v) {
        v = to_little(v);
        out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
    }

    void put_f64s(std::span<const double> v) {
        if constexpr (std::endian::native == std::endian::little) {
            out_.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size_bytes()));
        } else {
            for (double x : v) put(x);
        }
    }

    void close() {
        out_.close();
        if (!out_) throw Error("write failed");
    }

private:
    std::ofstream out_;
};

class BinaryReader {
public:
    explicit BinaryReader(const std::filesystem::path& path) : in_(path, std::ios::binary), name_(path.string()) {
        if (!in_) throw FormatError("cannot open " + name_);
    }

    void expect_magic(std::string_view m) {
        std::string got(m.size(), '\0');
        in_.read(got.data(), static_cast<std::streamsize>(got.size()));
        if (!in_ || got != m) throw FormatError(name_ + ": bad magic, expected \"" + std::string(m) + "\"");
    }

    template <class T>
    T get() {
        T v;
        in_.read(reinterpret_cast<char*>(&v), sizeof(T));
        if (!in_) throw FormatError(name_ + ": truncated file");
        return to_little(v);
    }

    void get_f64s(std::span<double> v) {
        in_.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size_bytes()));
        if (!in_) throw FormatError(name_ + ": truncated file");
        if constexpr (std::endian::native == std::endian::big)
            for (double& x : v) x = to_little(x);
    }

    /// Throws if unread bytes remain.
    void expect_end() {
        if (in_.peek() != std::char_traits<char>::eof()) throw FormatError(name_ + ": trailing bytes");
    }

private:
    std::ifstream in_;
    std::string name_;
};

}  // namespace frontlearn::io
