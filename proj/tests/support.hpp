#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <optional>
#include <string>

#include "grasorw/graph_store.hpp"
#include "grasorw/partition.hpp"

namespace grasorw::testing {

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("grasorw-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter.fetch_add(1)));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline GraphStore make_store(EdgeList edges, const std::filesystem::path& dir, std::uint64_t block_size,
                             unsigned id_width = 4) {
  return partition_sequential(std::move(edges), dir, PartitionOptions{block_size, id_width});
}

/// The 8-vertex graph of the worked loading example: blocks {0,1,2},
/// {3,4,5}, {6,7} at 4-byte entries.
inline EdgeList worked_example_graph() {
  EdgeList g;
  g.edges = {{0, 1}, {1, 2}, {2, 6}, {3, 4}, {3, 6}, {4, 6}, {5, 7}, {6, 7}};
  g.vertex_count = 8;
  return g;
}

}  // namespace grasorw::testing
