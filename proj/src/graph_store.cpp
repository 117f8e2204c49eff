#include "grasorw/graph_store.hpp"

#include <algorithm>
#include <mutex>
#include <string>

namespace grasorw {

namespace fs = std::filesystem;

void GraphMeta::validate() const {
  if (block_count < 1 || block_count > kMaxBlocks) {
    throw Error("block_count " + std::to_string(block_count) + " outside [1, 1024]");
  }
  if (id_width != 4 && id_width != 8) throw Error("id_width must be 4 or 8");
  if (vertex_count >= kMaxVertices) throw Error("vertex_count exceeds 2^42");
  if (id_width == 4 && vertex_count >= (std::uint64_t{1} << 32)) {
    throw Error("vertex_count does not fit 4-byte neighbor ids");
  }
}

IoStats IoStats::operator-(const IoStats& o) const {
  return {block_io_count - o.block_io_count,       block_io_bytes - o.block_io_bytes,
          ondemand_io_count - o.ondemand_io_count, ondemand_io_bytes - o.ondemand_io_bytes,
          vertex_io_count - o.vertex_io_count,     vertex_io_bytes - o.vertex_io_bytes};
}

GraphMeta read_meta(const fs::path& dir) {
  auto buf = io::read_file(dir / "meta.bin");
  constexpr std::size_t kSize = 4 + 4 + 8 + 8 + 4 + 1 + 8;
  if (buf.size() != kSize) throw Error("meta.bin: unexpected size " + std::to_string(buf.size()));
  if (!std::equal(buf.begin(), buf.begin() + 4, kStoreMagic)) throw Error("meta.bin: bad magic");
  const unsigned char* p = buf.data() + 4;
  auto version = io::load_le<std::uint32_t>(p);
  if (version != kStoreVersion) throw Error("meta.bin: unsupported version " + std::to_string(version));
  GraphMeta m;
  m.vertex_count = io::load_le<std::uint64_t>(p + 4);
  m.edge_count = io::load_le<std::uint64_t>(p + 12);
  m.block_count = io::load_le<std::uint32_t>(p + 20);
  m.id_width = p[24];
  m.block_size = io::load_le<std::uint64_t>(p + 25);
  m.validate();
  return m;
}

void write_meta(const fs::path& dir, const GraphMeta& meta) {
  io::FileWriter w(dir / "meta.bin");
  w.write(kStoreMagic, 4);
  w.put<std::uint32_t>(kStoreVersion);
  w.put<std::uint64_t>(meta.vertex_count);
  w.put<std::uint64_t>(meta.edge_count);
  w.put<std::uint32_t>(meta.block_count);
  w.put<std::uint8_t>(static_cast<std::uint8_t>(meta.id_width));
  w.put<std::uint64_t>(meta.block_size);
  w.close();
}

// ---------------------------------------------------------------------------
// BlockData

BlockData::BlockData(block_t id, LoadMode mode, vertex_t start, vertex_t span, const GraphStore* store)
    : id_(id), mode_(mode), start_(start), span_(span), store_(store), accounting_(store->accounting()) {}

std::size_t BlockData::resident_vertices() const {
  if (mode_ == LoadMode::Full) return span_;
  std::shared_lock lock(fetched_mu_);
  return activated_.size() + fetched_.size();
}

void BlockData::touch(std::size_t slot, std::uint64_t degree) const {
  auto& flag = touched_[slot];
  if (flag.load(std::memory_order_relaxed) != 0) return;
  if (flag.exchange(1, std::memory_order_relaxed) == 0) {
    touched_bytes_.fetch_add(accounting_.segment_bytes(degree), std::memory_order_relaxed);
  }
}

std::optional<AdjacencySlice> BlockData::peek(vertex_t v) const {
  if (!contains(v)) return std::nullopt;
  if (mode_ == LoadMode::Full) {
    auto local = v - start_;
    return AdjacencySlice{v, {neighbors_.data() + offsets_[local], neighbors_.data() + offsets_[local + 1]}};
  }
  auto it = std::lower_bound(activated_.begin(), activated_.end(), v);
  if (it != activated_.end() && *it == v) {
    auto k = static_cast<std::size_t>(it - activated_.begin());
    return AdjacencySlice{v, {neighbors_.data() + offsets_[k], neighbors_.data() + offsets_[k + 1]}};
  }
  std::shared_lock lock(fetched_mu_);
  auto f = fetched_.find(v);
  if (f == fetched_.end()) return std::nullopt;
  return AdjacencySlice{v, *f->second};
}

AdjacencySlice BlockData::adjacency(vertex_t v) const {
  if (!contains(v)) {
    throw std::out_of_range("vertex " + std::to_string(v) + " not in block " + std::to_string(id_));
  }
  if (mode_ == LoadMode::Full) {
    auto local = v - start_;
    auto begin = offsets_[local];
    auto end = offsets_[local + 1];
    touch(local, end - begin);
    return {v, {neighbors_.data() + begin, neighbors_.data() + end}};
  }
  auto it = std::lower_bound(activated_.begin(), activated_.end(), v);
  if (it != activated_.end() && *it == v) {
    auto k = static_cast<std::size_t>(it - activated_.begin());
    touch(k, offsets_[k + 1] - offsets_[k]);
    return {v, {neighbors_.data() + offsets_[k], neighbors_.data() + offsets_[k + 1]}};
  }
  return fetch_missing(v);
}

AdjacencySlice BlockData::fetch_missing(vertex_t v) const {
  {
    std::shared_lock lock(fetched_mu_);
    auto f = fetched_.find(v);
    if (f != fetched_.end()) return {v, *f->second};
  }
  // Concurrent fetches of the same vertex are allowed; only the first insert
  // is kept and charged.
  auto adj = store_->fetch_vertex(v);
  auto owned = std::make_unique<const std::vector<vertex_t>>(std::move(adj.neighbors));
  std::unique_lock lock(fetched_mu_);
  auto [it, inserted] = fetched_.try_emplace(v, std::move(owned));
  if (inserted) {
    auto bytes = accounting_.segment_bytes(it->second->size());
    loaded_bytes_.fetch_add(bytes, std::memory_order_relaxed);
    touched_bytes_.fetch_add(bytes, std::memory_order_relaxed);
  }
  return {v, *it->second};
}

// ---------------------------------------------------------------------------
// GraphStore

GraphStore GraphStore::open(const fs::path& dir, std::optional<IoAccounting> accounting) {
  GraphStore s;
  s.dir_ = dir;
  s.meta_ = read_meta(dir);
  s.accounting_ = accounting.value_or(IoAccounting{8, s.meta_.id_width});
  s.counters_ = std::make_unique<Counters>();

  auto sv = io::read_file(dir / "start_vertex.bin");
  if (sv.size() != (std::size_t{s.meta_.block_count} + 1) * 8) throw Error("start_vertex.bin: size mismatch");
  s.starts_.resize(s.meta_.block_count + 1);
  for (std::size_t k = 0; k < s.starts_.size(); ++k) s.starts_[k] = io::load_le<std::uint64_t>(sv.data() + 8 * k);
  if (s.starts_.front() != 0 || s.starts_.back() != s.meta_.vertex_count) {
    throw Error("start_vertex.bin: table must span [0, vertex_count]");
  }
  for (std::size_t k = 1; k < s.starts_.size(); ++k) {
    if (s.starts_[k] <= s.starts_[k - 1]) throw Error("start_vertex.bin: not strictly increasing");
    if (s.starts_[k] - s.starts_[k - 1] > kMaxBlockSpan) throw Error("start_vertex.bin: block span exceeds 2^28");
  }

  s.index_ = io::RandomAccessFile(dir / "index.bin");
  s.csr_ = io::RandomAccessFile(dir / "csr.bin");
  if (s.index_.size() != (s.meta_.vertex_count + 1) * 8) throw Error("index.bin: size mismatch");
  if (s.csr_.size() != s.meta_.edge_count * s.meta_.id_width) throw Error("csr.bin: size mismatch");
  return s;
}

block_t GraphStore::block_of(vertex_t v) const {
  if (v >= meta_.vertex_count) {
    throw std::out_of_range("vertex " + std::to_string(v) + " >= vertex_count " + std::to_string(meta_.vertex_count));
  }
  auto it = std::upper_bound(starts_.begin(), starts_.end(), v);
  return static_cast<block_t>(it - starts_.begin() - 1);
}

std::pair<std::uint64_t, std::uint64_t> GraphStore::read_offsets(vertex_t v) const {
  unsigned char buf[16];
  index_.read_at(v * 8, buf, sizeof buf);
  auto begin = io::load_le<std::uint64_t>(buf);
  auto end = io::load_le<std::uint64_t>(buf + 8);
  if (end < begin || end > meta_.edge_count) throw Error("index.bin: corrupt offsets at vertex " + std::to_string(v));
  return {begin, end};
}

void GraphStore::read_neighbors(std::uint64_t begin, std::uint64_t end, vertex_t* out) const {
  if (end == begin) return;
  const unsigned w = meta_.id_width;
  std::vector<unsigned char> raw((end - begin) * w);
  csr_.read_at(begin * w, raw.data(), raw.size());
  io::decode_ids(raw.data(), w, {out, static_cast<std::size_t>(end - begin)});
}

std::uint64_t GraphStore::full_block_bytes(block_t b) const {
  if (b >= meta_.block_count) throw std::out_of_range("block id out of range");
  auto [first, unused] = read_offsets(starts_[b]);
  (void)unused;
  unsigned char buf[8];
  index_.read_at(starts_[b + 1] * 8, buf, 8);
  auto last = io::load_le<std::uint64_t>(buf);
  return block_span(b) * accounting_.offset_bytes + (last - first) * accounting_.id_bytes;
}

std::unique_ptr<BlockData> GraphStore::load_block_full(block_t b) const {
  if (b >= meta_.block_count) {
    throw std::out_of_range("block " + std::to_string(b) + " >= block_count " + std::to_string(meta_.block_count));
  }
  const vertex_t start = starts_[b];
  const vertex_t span = starts_[b + 1] - start;
  std::unique_ptr<BlockData> data(new BlockData(b, LoadMode::Full, start, span, this));

  std::vector<unsigned char> raw((span + 1) * 8);
  index_.read_at(start * 8, raw.data(), raw.size());
  const std::uint64_t base = io::load_le<std::uint64_t>(raw.data());
  data->offsets_.resize(span + 1);
  for (std::size_t k = 0; k <= span; ++k) {
    auto off = io::load_le<std::uint64_t>(raw.data() + 8 * k);
    if (off < base || off > meta_.edge_count || (k > 0 && off < base + data->offsets_[k - 1])) {
      throw Error("index.bin: corrupt offsets in block " + std::to_string(b));
    }
    data->offsets_[k] = off - base;
  }
  const std::uint64_t edges = data->offsets_[span];
  data->neighbors_.resize(edges);
  read_neighbors(base, base + edges, data->neighbors_.data());
  data->touched_ = std::make_unique<std::atomic<std::uint8_t>[]>(span);

  const std::uint64_t bytes = span * accounting_.offset_bytes + edges * accounting_.id_bytes;
  data->loaded_bytes_.store(bytes, std::memory_order_relaxed);
  counters_->block_io_count.fetch_add(1, std::memory_order_relaxed);
  counters_->block_io_bytes.fetch_add(bytes, std::memory_order_relaxed);
  return data;
}

std::unique_ptr<BlockData> GraphStore::load_block_on_demand(block_t b, std::span<const vertex_t> activated) const {
  if (b >= meta_.block_count) {
    throw std::out_of_range("block " + std::to_string(b) + " >= block_count " + std::to_string(meta_.block_count));
  }
  const vertex_t start = starts_[b];
  const vertex_t span = starts_[b + 1] - start;
  std::unique_ptr<BlockData> data(new BlockData(b, LoadMode::OnDemand, start, span, this));

  data->activated_.assign(activated.begin(), activated.end());
  std::sort(data->activated_.begin(), data->activated_.end());
  data->activated_.erase(std::unique(data->activated_.begin(), data->activated_.end()), data->activated_.end());
  for (vertex_t v : data->activated_) {
    if (!data->contains(v)) {
      throw std::invalid_argument("activated vertex " + std::to_string(v) + " outside block " + std::to_string(b));
    }
  }

  std::uint64_t bytes = 0;
  data->offsets_.reserve(data->activated_.size() + 1);
  data->offsets_.push_back(0);
  for (vertex_t v : data->activated_) {
    auto [begin, end] = read_offsets(v);
    auto pos = data->neighbors_.size();
    data->neighbors_.resize(pos + (end - begin));
    read_neighbors(begin, end, data->neighbors_.data() + pos);
    data->offsets_.push_back(data->neighbors_.size());
    bytes += accounting_.segment_bytes(end - begin);
  }
  data->touched_ = std::make_unique<std::atomic<std::uint8_t>[]>(data->activated_.size());
  data->loaded_bytes_.store(bytes, std::memory_order_relaxed);
  counters_->ondemand_io_count.fetch_add(1, std::memory_order_relaxed);
  counters_->ondemand_io_bytes.fetch_add(bytes, std::memory_order_relaxed);
  return data;
}

Adjacency GraphStore::fetch_vertex(vertex_t v) const {
  if (v >= meta_.vertex_count) {
    throw std::out_of_range("vertex " + std::to_string(v) + " >= vertex_count " + std::to_string(meta_.vertex_count));
  }
  auto [begin, end] = read_offsets(v);
  Adjacency adj{v, std::vector<vertex_t>(end - begin)};
  read_neighbors(begin, end, adj.neighbors.data());
  counters_->vertex_io_count.fetch_add(1, std::memory_order_relaxed);
  counters_->vertex_io_bytes.fetch_add(accounting_.segment_bytes(end - begin), std::memory_order_relaxed);
  return adj;
}

std::vector<std::uint64_t> GraphStore::degrees() const {
  std::vector<std::uint64_t> out(meta_.vertex_count);
  constexpr std::uint64_t kChunk = 1 << 16;
  std::vector<unsigned char> raw;
  for (std::uint64_t v = 0; v < meta_.vertex_count; v += kChunk) {
    const std::uint64_t n = std::min(kChunk, meta_.vertex_count - v);
    raw.resize((n + 1) * 8);
    index_.read_at(v * 8, raw.data(), raw.size());
    for (std::uint64_t k = 0; k < n; ++k) {
      out[v + k] = io::load_le<std::uint64_t>(raw.data() + 8 * (k + 1)) - io::load_le<std::uint64_t>(raw.data() + 8 * k);
    }
  }
  return out;
}

IoStats GraphStore::io_stats() const {
  const auto& c = *counters_;
  return {c.block_io_count.load(),    c.block_io_bytes.load(),  c.ondemand_io_count.load(),
          c.ondemand_io_bytes.load(), c.vertex_io_count.load(), c.vertex_io_bytes.load()};
}

}  // namespace grasorw
