#include "grasorw/io.hpp"

#include <cerrno>
#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <bit>
#include <utility>

namespace grasorw::io {

namespace {

std::string errno_message(const std::string& what, const std::filesystem::path& path) {
  return what + " '" + path.string() + "': " + std::strerror(errno);
}

}  // namespace

RandomAccessFile::RandomAccessFile(const std::filesystem::path& path) : path_(path) {
  fd_ = ::open(path.c_str(), O_RDONLY | O_CLOEXEC);
  if (fd_ < 0) throw Error(errno_message("cannot open", path));
  struct stat st {};
  if (::fstat(fd_, &st) != 0) {
    ::close(fd_);
    fd_ = -1;
    throw Error(errno_message("cannot stat", path));
  }
  size_ = static_cast<std::uint64_t>(st.st_size);
}

RandomAccessFile::~RandomAccessFile() {
  if (fd_ >= 0) ::close(fd_);
}

RandomAccessFile::RandomAccessFile(RandomAccessFile&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)), size_(other.size_), path_(std::move(other.path_)) {}

RandomAccessFile& RandomAccessFile::operator=(RandomAccessFile&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = std::exchange(other.fd_, -1);
    size_ = other.size_;
    path_ = std::move(other.path_);
  }
  return *this;
}

void RandomAccessFile::read_at(std::uint64_t offset, void* dst, std::size_t len) const {
  auto* out = static_cast<char*>(dst);
  std::size_t done = 0;
  while (done < len) {
    ssize_t n = ::pread(fd_, out + done, len - done, static_cast<off_t>(offset + done));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(errno_message("read failed on", path_));
    }
    if (n == 0) {
      throw Error("truncated file '" + path_.string() + "': wanted " + std::to_string(len) +
                  " bytes at offset " + std::to_string(offset));
    }
    done += static_cast<std::size_t>(n);
  }
}

FileWriter::FileWriter(const std::filesystem::path& path, bool append) : path_(path) {
  file_ = std::fopen(path.c_str(), append ? "ab" : "wb");
  if (file_ == nullptr) throw Error(errno_message("cannot create", path));
  std::setvbuf(file_, nullptr, _IOFBF, 1 << 20);
}

FileWriter::~FileWriter() {
  if (file_ != nullptr) std::fclose(file_);
}

FileWriter::FileWriter(FileWriter&& other) noexcept
    : file_(std::exchange(other.file_, nullptr)), path_(std::move(other.path_)) {}

FileWriter& FileWriter::operator=(FileWriter&& other) noexcept {
  if (this != &other) {
    if (file_ != nullptr) std::fclose(file_);
    file_ = std::exchange(other.file_, nullptr);
    path_ = std::move(other.path_);
  }
  return *this;
}

void FileWriter::write(const void* src, std::size_t len) {
  if (len == 0) return;
  if (std::fwrite(src, 1, len, file_) != len) throw Error(errno_message("write failed on", path_));
}

void FileWriter::put_width(std::uint64_t value, unsigned width) {
  unsigned char buf[8];
  for (unsigned i = 0; i < width; ++i) buf[i] = static_cast<unsigned char>(value >> (8 * i));
  write(buf, width);
}

void FileWriter::close() {
  if (file_ == nullptr) return;
  int rc = std::fclose(file_);
  file_ = nullptr;
  if (rc != 0) throw Error(errno_message("close failed on", path_));
}

void decode_ids(const unsigned char* src, unsigned width, std::span<vertex_t> out) {
  if constexpr (std::endian::native == std::endian::little) {
    if (width == 8) {
      std::memcpy(out.data(), src, out.size() * 8);
      return;
    }
    if (width == 4) {
      for (std::size_t k = 0; k < out.size(); ++k) {
        std::uint32_t v;
        std::memcpy(&v, src + 4 * k, 4);
        out[k] = v;
      }
      return;
    }
  }
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = load_le_width(src + width * k, width);
}

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  RandomAccessFile f(path);
  std::vector<unsigned char> buf(f.size());
  if (!buf.empty()) f.read_at(0, buf.data(), buf.size());
  return buf;
}

}  // namespace grasorw::io
