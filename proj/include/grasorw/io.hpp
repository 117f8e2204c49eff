#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "grasorw/types.hpp"

namespace grasorw::io {

/// Read-only file handle for positioned reads. pread() does not move a shared
/// cursor, so one instance can serve concurrent readers.
class RandomAccessFile {
 public:
  RandomAccessFile() = default;
  explicit RandomAccessFile(const std::filesystem::path& path);
  ~RandomAccessFile();

  RandomAccessFile(RandomAccessFile&& other) noexcept;
  RandomAccessFile& operator=(RandomAccessFile&& other) noexcept;
  RandomAccessFile(const RandomAccessFile&) = delete;
  RandomAccessFile& operator=(const RandomAccessFile&) = delete;

  // Throws Error on short reads.
  void read_at(std::uint64_t offset, void* dst, std::size_t len) const;

  std::uint64_t size() const { return size_; }
  bool is_open() const { return fd_ >= 0; }
  const std::filesystem::path& path() const { return path_; }

 private:
  int fd_ = -1;
  std::uint64_t size_ = 0;
  std::filesystem::path path_;
};

/// Buffered sequential writer; flushes on destruction.
class FileWriter {
 public:
  FileWriter() = default;
  explicit FileWriter(const std::filesystem::path& path, bool append = false);
  ~FileWriter();

  FileWriter(FileWriter&& other) noexcept;
  FileWriter& operator=(FileWriter&& other) noexcept;
  FileWriter(const FileWriter&) = delete;
  FileWriter& operator=(const FileWriter&) = delete;

  void write(const void* src, std::size_t len);
  void close();
  bool is_open() const { return file_ != nullptr; }

  template <class T>
  void put(T value) {
    static_assert(std::is_integral_v<T>);
    unsigned char buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>(value >> (8 * i));
    write(buf, sizeof(T));
  }

  // Writes an unsigned integer using `width` little-endian bytes.
  void put_width(std::uint64_t value, unsigned width);

 private:
  std::FILE* file_ = nullptr;
  std::filesystem::path path_;
};

template <class T>
T load_le(const unsigned char* p) {
  static_assert(std::is_integral_v<T>);
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<T>(p[i]) << (8 * i));
  return v;
}

inline std::uint64_t load_le_width(const unsigned char* p, unsigned width) {
  std::uint64_t v = 0;
  for (unsigned i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

/// Decodes `count` little-endian integers of `width` bytes into `out`.
void decode_ids(const unsigned char* src, unsigned width, std::span<vertex_t> out);

std::vector<unsigned char> read_file(const std::filesystem::path& path);

}  // namespace grasorw::io
