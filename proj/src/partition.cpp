#include "grasorw/partition.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <fstream>
#include <map>
#include <string>
#include <string_view>

#include <spdlog/spdlog.h>

namespace grasorw {

namespace fs = std::filesystem;

namespace {

bool parse_u64(std::string_view& s, std::uint64_t& out) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return false;
  s.remove_prefix(first);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || ptr == s.data()) return false;
  s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
  return s.empty() || s.front() == ' ' || s.front() == '\t' || s.front() == '\r';
}

bool is_blank(std::string_view s) { return s.find_first_not_of(" \t\r") == std::string_view::npos; }

bool is_comment(std::string_view s) {
  auto first = s.find_first_not_of(" \t");
  return first != std::string_view::npos && s[first] == '#';
}

// Visits every non-comment line as two integers.
template <class Fn>
void for_each_pair(const fs::path& path, const char* what, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw Error(std::string("cannot open ") + what + " '" + path.string() + "'");
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s(line);
    if (is_blank(s) || is_comment(s)) continue;
    std::uint64_t a = 0, b = 0;
    if (!parse_u64(s, a) || !parse_u64(s, b) || !is_blank(s)) {
      throw Error(path.string() + ":" + std::to_string(lineno) + ": cannot parse '" + line + "'");
    }
    fn(a, b, lineno);
  }
}

}  // namespace

CsrGraph build_csr(std::vector<Edge> edges, vertex_t n) {
  CsrGraph csr;
  csr.offsets.assign(n + 1, 0);
  for (const auto& e : edges) {
    if (e.src >= n || e.dst >= n) throw std::invalid_argument("edge endpoint exceeds vertex count");
    if (e.src == e.dst) continue;
    ++csr.offsets[e.src + 1];
    ++csr.offsets[e.dst + 1];
  }
  for (vertex_t v = 0; v < n; ++v) csr.offsets[v + 1] += csr.offsets[v];
  std::vector<vertex_t> fill(csr.offsets.begin(), csr.offsets.end() - 1);
  csr.neighbors.resize(csr.offsets[n]);
  for (const auto& e : edges) {
    if (e.src == e.dst) continue;
    csr.neighbors[fill[e.src]++] = e.dst;
    csr.neighbors[fill[e.dst]++] = e.src;
  }
  std::vector<Edge>().swap(edges);
  std::vector<vertex_t>().swap(fill);

  // Sort and deduplicate each list, compacting in place.
  std::uint64_t write = 0;
  std::uint64_t begin = 0;
  for (vertex_t v = 0; v < n; ++v) {
    const std::uint64_t end = csr.offsets[v + 1];
    auto first = csr.neighbors.begin() + static_cast<std::ptrdiff_t>(begin);
    auto last = csr.neighbors.begin() + static_cast<std::ptrdiff_t>(end);
    std::sort(first, last);
    last = std::unique(first, last);
    csr.offsets[v] = write;
    for (auto it = first; it != last; ++it) csr.neighbors[write++] = *it;
    begin = end;
  }
  csr.offsets[n] = write;
  csr.neighbors.resize(write);
  csr.neighbors.shrink_to_fit();
  return csr;
}

namespace {

void check_vertex_limit(vertex_t n, unsigned id_width) {
  if (n >= kMaxVertices) throw Error("vertex id exceeds 2^42 - 1");
  if (id_width == 4 && n >= (std::uint64_t{1} << 32)) {
    throw Error("vertex ids do not fit 4-byte neighbor entries; use id_width 8");
  }
}

GraphStore write_store(const fs::path& dir, const CsrGraph& csr, const std::vector<vertex_t>& starts, unsigned id_width,
                       std::uint64_t block_size) {
  if (starts.size() - 1 > kMaxBlocks) {
    throw Error("partition needs " + std::to_string(starts.size() - 1) + " blocks; the limit is 1024");
  }
  fs::create_directories(dir);
  GraphMeta meta;
  meta.vertex_count = csr.offsets.size() - 1;
  meta.edge_count = csr.neighbors.size();
  meta.block_count = static_cast<block_t>(starts.size() - 1);
  meta.id_width = id_width;
  meta.block_size = block_size;
  meta.validate();
  write_meta(dir, meta);
  {
    io::FileWriter w(dir / "start_vertex.bin");
    for (auto s : starts) w.put<std::uint64_t>(s);
    w.close();
  }
  {
    io::FileWriter w(dir / "index.bin");
    for (auto o : csr.offsets) w.put<std::uint64_t>(o);
    w.close();
  }
  {
    io::FileWriter w(dir / "csr.bin");
    if (id_width == 4) {
      std::vector<std::uint32_t> chunk;
      chunk.reserve(1 << 16);
      for (std::size_t k = 0; k < csr.neighbors.size(); ++k) {
        chunk.push_back(static_cast<std::uint32_t>(csr.neighbors[k]));
        if (chunk.size() == chunk.capacity() || k + 1 == csr.neighbors.size()) {
          if constexpr (std::endian::native == std::endian::little) {
            w.write(chunk.data(), chunk.size() * 4);
          } else {
            for (auto x : chunk) w.put<std::uint32_t>(x);
          }
          chunk.clear();
        }
      }
    } else {
      for (auto x : csr.neighbors) w.put<std::uint64_t>(x);
    }
    w.close();
  }
  return GraphStore::open(dir);
}

}  // namespace

EdgeList read_edge_list(const fs::path& path) {
  EdgeList list;
  for_each_pair(path, "edge list", [&](std::uint64_t a, std::uint64_t b, std::uint64_t lineno) {
    if (a >= kMaxVertices || b >= kMaxVertices) {
      throw Error(path.string() + ":" + std::to_string(lineno) + ": vertex id exceeds 2^42 - 1");
    }
    list.edges.push_back({a, b});
    list.vertex_count = std::max(list.vertex_count, std::max(a, b) + 1);
  });
  return list;
}

void write_edge_list(const fs::path& path, const EdgeList& list) {
  std::ofstream out(path);
  if (!out) throw Error("cannot create '" + path.string() + "'");
  std::string buf;
  for (const auto& e : list.edges) {
    buf += std::to_string(e.src);
    buf += ' ';
    buf += std::to_string(e.dst);
    buf += '\n';
    if (buf.size() > (1 << 20)) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
  if (!out) throw Error("write failed on '" + path.string() + "'");
}

GraphStore partition_sequential(const fs::path& edge_list, const fs::path& out_dir, const PartitionOptions& opts) {
  return partition_sequential(read_edge_list(edge_list), out_dir, opts);
}

GraphStore partition_sequential(EdgeList edges, const fs::path& out_dir, const PartitionOptions& opts) {
  if (opts.id_width != 4 && opts.id_width != 8) throw Error("id_width must be 4 or 8");
  if (opts.block_size == 0) throw Error("block_size must be positive");
  for (const auto& e : edges.edges) {
    if (e.src >= kMaxVertices || e.dst >= kMaxVertices) throw Error("vertex id exceeds 2^42 - 1");
    edges.vertex_count = std::max(edges.vertex_count, std::max(e.src, e.dst) + 1);
  }
  const vertex_t n = edges.vertex_count;
  if (n == 0) throw Error("edge list is empty");
  check_vertex_limit(n, opts.id_width);

  CsrGraph csr = build_csr(std::move(edges.edges), n);

  std::vector<vertex_t> starts{0};
  std::uint64_t bytes = 0;
  for (vertex_t v = 0; v < n; ++v) {
    const std::uint64_t vb = 8 + (csr.offsets[v + 1] - csr.offsets[v]) * opts.id_width;
    const bool full = bytes + vb > opts.block_size || v - starts.back() >= kMaxBlockSpan;
    if (v != starts.back() && full) {
      starts.push_back(v);
      bytes = 0;
      if (starts.size() - 1 >= kMaxBlocks) {
        throw Error("partition needs more than 1024 blocks; increase --block-size");
      }
    }
    bytes += vb;
  }
  starts.push_back(n);
  spdlog::info("partitioned {} vertices / {} directed edges into {} blocks", n, csr.neighbors.size(),
               starts.size() - 1);
  return write_store(out_dir, csr, starts, opts.id_width, opts.block_size);
}

GraphStore import_partition(const fs::path& edge_list, const fs::path& block_file, const fs::path& out_dir,
                            unsigned id_width) {
  if (id_width != 4 && id_width != 8) throw Error("id_width must be 4 or 8");
  EdgeList list = read_edge_list(edge_list);

  std::vector<std::uint64_t> assignment;
  constexpr std::uint64_t kUnassigned = ~std::uint64_t{0};
  for_each_pair(block_file, "block file", [&](std::uint64_t v, std::uint64_t b, std::uint64_t lineno) {
    if (v >= kMaxVertices) {
      throw Error(block_file.string() + ":" + std::to_string(lineno) + ": vertex id exceeds 2^42 - 1");
    }
    if (v >= assignment.size()) assignment.resize(v + 1, kUnassigned);
    if (assignment[v] != kUnassigned && assignment[v] != b) {
      throw Error(block_file.string() + ":" + std::to_string(lineno) + ": vertex " + std::to_string(v) +
                  " assigned to two blocks");
    }
    assignment[v] = b;
  });
  const vertex_t n = std::max<vertex_t>(list.vertex_count, assignment.size());
  if (n == 0) throw Error("edge list is empty");
  check_vertex_limit(n, id_width);
  assignment.resize(n, kUnassigned);
  for (vertex_t v = 0; v < n; ++v) {
    if (assignment[v] == kUnassigned) throw Error("vertex " + std::to_string(v) + " has no block assignment");
  }

  // Dense block ids in ascending order of the given labels.
  std::map<std::uint64_t, block_t> dense;
  for (auto b : assignment) dense.emplace(b, 0);
  if (dense.size() > kMaxBlocks) {
    throw Error("block file uses " + std::to_string(dense.size()) + " blocks; the limit is 1024");
  }
  block_t next = 0;
  for (auto& [label, id] : dense) id = next++;

  std::vector<vertex_t> count(dense.size() + 1, 0);
  for (auto b : assignment) ++count[dense[b] + 1];
  std::vector<vertex_t> starts(count.size());
  for (std::size_t k = 1; k < count.size(); ++k) starts[k] = starts[k - 1] + count[k];
  for (std::size_t k = 1; k < starts.size(); ++k) {
    if (starts[k] - starts[k - 1] > kMaxBlockSpan) throw Error("a block holds more than 2^28 vertices");
  }

  std::vector<vertex_t> old_to_new(n);
  std::vector<vertex_t> new_to_old(n);
  std::vector<vertex_t> cursor(starts.begin(), starts.end() - 1);
  for (vertex_t v = 0; v < n; ++v) {
    auto nv = cursor[dense[assignment[v]]]++;
    old_to_new[v] = nv;
    new_to_old[nv] = v;
  }
  for (auto& e : list.edges) {
    e.src = old_to_new[e.src];
    e.dst = old_to_new[e.dst];
  }
  CsrGraph csr = build_csr(std::move(list.edges), n);

  std::uint64_t largest = 0;
  for (std::size_t k = 0; k + 1 < starts.size(); ++k) {
    auto bytes = (starts[k + 1] - starts[k]) * 8 + (csr.offsets[starts[k + 1]] - csr.offsets[starts[k]]) * id_width;
    largest = std::max(largest, bytes);
  }
  auto store = write_store(out_dir, csr, starts, id_width, largest);
  io::FileWriter w(out_dir / "vertex_remap.bin");
  for (auto old : new_to_old) w.put<std::uint64_t>(old);
  w.close();
  return store;
}

std::vector<vertex_t> read_vertex_remap(const fs::path& dir) {
  auto buf = io::read_file(dir / "vertex_remap.bin");
  if (buf.size() % 8 != 0) throw Error("vertex_remap.bin: size not a multiple of 8");
  std::vector<vertex_t> remap(buf.size() / 8);
  for (std::size_t k = 0; k < remap.size(); ++k) remap[k] = io::load_le<std::uint64_t>(buf.data() + 8 * k);
  return remap;
}

}  // namespace grasorw
