#include "grasorw/trajectory.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "grasorw/io.hpp"

namespace grasorw {

WalkStartTable::WalkStartTable(std::span<const WalkStart> starts) : starts_(starts.begin(), starts.end()) {
  prefix_.reserve(starts_.size() + 1);
  prefix_.push_back(0);
  for (const auto& s : starts_) prefix_.push_back(prefix_.back() + s.walk_count);
}

WalkStartTable::Entry WalkStartTable::lookup(std::uint64_t walk_id) const {
  if (walk_id >= total()) throw std::out_of_range(fmt::format("walk id {} >= {}", walk_id, total()));
  auto it = std::upper_bound(prefix_.begin(), prefix_.end(), walk_id);
  const auto k = static_cast<std::size_t>(it - prefix_.begin() - 1);
  return {starts_[k].source, walk_id - prefix_[k]};
}

void TrajectoryCollector::begin(std::uint64_t walk_count, unsigned threads) {
  walk_count_ = walk_count;
  threads_.assign(std::max(threads, 1u), {});
  result_.clear();
}

void TrajectoryCollector::fragment(unsigned thread, std::uint64_t walk_id, hop_t start_hop,
                                   std::span<const vertex_t> vertices) {
  auto& t = threads_[thread];
  t.pieces.push_back({walk_id, start_hop, t.vertices.size(), static_cast<std::uint32_t>(vertices.size())});
  t.vertices.insert(t.vertices.end(), vertices.begin(), vertices.end());
}

void TrajectoryCollector::end() {
  struct Ref {
    std::uint64_t walk_id;
    hop_t start_hop;
    unsigned thread;
    std::size_t piece;
  };
  std::vector<Ref> refs;
  for (unsigned t = 0; t < threads_.size(); ++t) {
    for (std::size_t k = 0; k < threads_[t].pieces.size(); ++k) {
      refs.push_back({threads_[t].pieces[k].walk_id, threads_[t].pieces[k].start_hop, t, k});
    }
  }
  std::sort(refs.begin(), refs.end(), [](const Ref& a, const Ref& b) {
    return a.walk_id != b.walk_id ? a.walk_id < b.walk_id : a.start_hop < b.start_hop;
  });

  result_.assign(walk_count_, {});
  for (const auto& r : refs) {
    if (r.walk_id >= walk_count_) throw std::logic_error(fmt::format("fragment for unknown walk {}", r.walk_id));
    const auto& piece = threads_[r.thread].pieces[r.piece];
    const vertex_t* v = threads_[r.thread].vertices.data() + piece.offset;
    auto& traj = result_[r.walk_id].vertices;
    if (traj.size() != r.start_hop + (traj.empty() ? 0u : 1u)) {
      throw std::logic_error(fmt::format("walk {}: fragment at hop {} does not continue {} vertices", r.walk_id,
                                         r.start_hop, traj.size()));
    }
    if (traj.empty()) {
      traj.assign(v, v + piece.length);
    } else {
      if (traj.back() != v[0]) throw std::logic_error(fmt::format("walk {}: fragments disagree at hop {}", r.walk_id,
                                                                  r.start_hop));
      traj.insert(traj.end(), v + 1, v + piece.length);
    }
  }
  for (auto& t : result_) {
    if (!t.vertices.empty()) t.source = t.vertices.front();
  }
  threads_.clear();
}

void EndpointCounter::begin(std::uint64_t /*walk_count*/, unsigned threads) {
  threads_.assign(std::max(threads, 1u), {});
  merged_.clear();
}

void EndpointCounter::finish(unsigned thread, std::uint64_t /*walk_id*/, vertex_t source, vertex_t endpoint) {
  ++threads_[thread][source][endpoint];
}

void EndpointCounter::end() {
  for (auto& per : threads_) {
    for (auto& [source, counts] : per) {
      auto& dst = merged_[source];
      for (auto [v, c] : counts) dst[v] += c;
    }
  }
  threads_.clear();
}

std::uint64_t EndpointCounter::total(vertex_t source) const {
  auto it = merged_.find(source);
  if (it == merged_.end()) return 0;
  std::uint64_t n = 0;
  for (auto [v, c] : it->second) n += c;
  return n;
}

std::vector<unsigned char> encode_trajectories(std::span<const Trajectory> trajectories, unsigned id_width) {
  if (id_width != 4 && id_width != 8) throw std::invalid_argument("id_width must be 4 or 8");
  std::vector<unsigned char> out;
  auto put = [&out](std::uint64_t v, unsigned width) {
    for (unsigned i = 0; i < width; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
  };
  for (const auto& t : trajectories) {
    put(t.source, 8);
    put(t.vertices.size(), 4);
    for (auto v : t.vertices) put(v, id_width);
  }
  return out;
}

void write_trajectories(const std::filesystem::path& path, std::span<const Trajectory> trajectories,
                        unsigned id_width) {
  io::FileWriter w(path);
  for (std::size_t k = 0; k < trajectories.size(); k += 4096) {
    auto bytes = encode_trajectories(trajectories.subspan(k, std::min<std::size_t>(4096, trajectories.size() - k)),
                                     id_width);
    w.write(bytes.data(), bytes.size());
  }
  w.close();
}

std::vector<Trajectory> read_trajectories(const std::filesystem::path& path, unsigned id_width) {
  const auto raw = io::read_file(path);
  std::vector<Trajectory> out;
  std::size_t pos = 0;
  while (pos < raw.size()) {
    if (raw.size() - pos < 12) throw Error(path.string() + ": truncated trajectory header");
    Trajectory t;
    t.source = io::load_le<std::uint64_t>(raw.data() + pos);
    const auto len = io::load_le<std::uint32_t>(raw.data() + pos + 8);
    pos += 12;
    if (raw.size() - pos < std::size_t{len} * id_width) throw Error(path.string() + ": truncated trajectory");
    t.vertices.resize(len);
    for (std::uint32_t k = 0; k < len; ++k) t.vertices[k] = io::load_le_width(raw.data() + pos + k * id_width, id_width);
    pos += std::size_t{len} * id_width;
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace grasorw
