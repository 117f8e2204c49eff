#include "grasorw/engine.hpp"

#include <omp.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "grasorw/kernels.hpp"
#include "grasorw/walk_codec.hpp"

namespace grasorw {

namespace fs = std::filesystem;

std::string to_string(EngineMode m) { return m == EngineMode::Triangular ? "triangular" : "plainbucket"; }

std::string to_string(LoadingPolicy p) {
  switch (p) {
    case LoadingPolicy::AlwaysFull: return "full";
    case LoadingPolicy::AlwaysOnDemand: return "ondemand";
    case LoadingPolicy::Learned: return "learned";
  }
  return "?";
}

EngineMode parse_engine_mode(std::string_view name) {
  if (name == "triangular") return EngineMode::Triangular;
  if (name == "plainbucket") return EngineMode::PlainBucket;
  throw std::invalid_argument("unknown engine mode '" + std::string(name) + "'");
}

LoadingPolicy parse_loading_policy(std::string_view name) {
  if (name == "full") return LoadingPolicy::AlwaysFull;
  if (name == "ondemand") return LoadingPolicy::AlwaysOnDemand;
  if (name == "learned") return LoadingPolicy::Learned;
  throw std::invalid_argument("unknown loading mode '" + std::string(name) + "'");
}

nlohmann::json Metrics::to_json() const {
  nlohmann::json j;
  j["block_io_count"] = block_io_count;
  j["block_io_bytes"] = block_io_bytes;
  j["ondemand_io_count"] = ondemand_io_count;
  j["ondemand_io_bytes"] = ondemand_io_bytes;
  j["vertex_io_count"] = vertex_io_count;
  j["vertex_io_bytes"] = vertex_io_bytes;
  j["walk_io_bytes"] = walk_io_bytes;
  j["walk_flush_bytes"] = walk_flush_bytes;
  j["steps_sampled"] = steps_sampled;
  j["walks_started"] = walks_started;
  j["walks_finished"] = walks_finished;
  j["time_slots"] = time_slots;
  j["sweeps"] = sweeps;
  j["init_block_loads"] = init_block_loads;
  j["current_block_loads"] = current_block_loads;
  j["ancillary_full_loads"] = ancillary_full_loads;
  j["ancillary_ondemand_loads"] = ancillary_ondemand_loads;
  j["block_loads"] = block_loads();
  j["sweep_block_loads"] = sweep_block_loads;
  auto util = nlohmann::json::array();
  for (const auto& u : io_utilization) {
    util.push_back({{"slot", u.slot},
                    {"current", u.current},
                    {"ancillary", u.ancillary},
                    {"mode", to_string(u.mode)},
                    {"walks", u.walks},
                    {"loaded_bytes", u.loaded_bytes},
                    {"touched_bytes", u.touched_bytes},
                    {"ratio", u.ratio()}});
  }
  j["io_utilization"] = std::move(util);
  j["wall_seconds"] = wall_seconds;
  j["init_seconds"] = init_seconds;
  j["load_seconds"] = load_seconds;
  j["execute_seconds"] = execute_seconds;
  j["simd"] = simd::isa_name(simd::active_isa());
  return j;
}

SchedulerKind EngineConfig::effective_scheduler() const {
  if (scheduler) return *scheduler;
  return mode == EngineMode::Triangular ? SchedulerKind::Iteration : SchedulerKind::GWMix;
}

void EngineConfig::validate() const {
  termination.validate();
  if (model.second_order()) model.params.validate();
  if (threads < 1) throw std::invalid_argument("threads must be at least 1");
  if (!(gwmix_prob > 0.0 && gwmix_prob < 1.0)) throw std::invalid_argument("gwmix probability must lie in (0, 1)");
  if (loading == LoadingPolicy::Learned && loader == nullptr) {
    throw std::invalid_argument("learned loading requires a loader model");
  }
  if (flush_threshold < 1) throw std::invalid_argument("flush threshold must be positive");
}

Route route_exit(EngineMode mode, block_t b, block_t i, block_t pre_block, block_t cur_block) {
  if (pre_block != b && pre_block != i) {
    throw std::logic_error(fmt::format("exit from block {} outside the resident pair ({}, {})", pre_block, b, i));
  }
  if (cur_block == b || cur_block == i) {
    throw std::logic_error(fmt::format("walk in resident block {} routed as an exit", cur_block));
  }
  if (mode == EngineMode::PlainBucket) return {Route::Kind::Pool, cur_block};
  if (cur_block > i && pre_block == b) return {Route::Kind::Bucket, cur_block};
  return {Route::Kind::Pool, std::min(pre_block, cur_block)};
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds(Clock::duration d) { return std::chrono::duration<double>(d).count(); }

class ErrorSlot {
 public:
  bool failed() const { return failed_.load(std::memory_order_relaxed); }
  void capture() {
    std::lock_guard lock(mu_);
    if (!first_) first_ = std::current_exception();
    failed_.store(true, std::memory_order_relaxed);
  }
  void rethrow() const {
    if (first_) std::rethrow_exception(first_);
  }

 private:
  std::mutex mu_;
  std::exception_ptr first_;
  std::atomic<bool> failed_{false};
};

struct Resident {
  const BlockData* a = nullptr;
  const BlockData* b = nullptr;

  const BlockData* find(vertex_t v) const {
    if (a && a->contains(v)) return a;
    if (b && b->contains(v)) return b;
    return nullptr;
  }
  bool contains(vertex_t v) const { return find(v) != nullptr; }
  AdjacencySlice adjacency(vertex_t v) const {
    const auto* d = find(v);
    if (!d) throw std::logic_error(fmt::format("vertex {} is not resident", v));
    return d->adjacency(v);
  }
};

struct Cursor {
  std::uint64_t walk_id = 0;
  vertex_t pre = kNoVertex;
  vertex_t cur = 0;
  hop_t hop = 0;
};

struct ThreadState {
  SplitMix64 rng;
  std::vector<vertex_t> fragment;
  std::uint64_t steps = 0;
  std::uint64_t finished = 0;
};

class ScratchDir {
 public:
  explicit ScratchDir(fs::path requested) {
    if (!requested.empty()) {
      path_ = std::move(requested);
      return;
    }
    static std::atomic<std::uint64_t> counter{0};
    path_ = fs::temp_directory_path() / fmt::format("grasorw-{}-{}", ::getpid(), counter.fetch_add(1));
    owned_ = true;
  }
  ~ScratchDir() {
    if (!owned_) return;
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
  bool owned_ = false;
};

class Engine {
 public:
  Engine(const GraphStore& store, std::span<const WalkStart> starts, const EngineConfig& cfg)
      : store_(store),
        cfg_(cfg),
        table_(starts),
        n_blocks_(store.block_count()),
        scratch_(cfg.work_dir),
        pools_(scratch_.path(), n_blocks_,
               cfg.mode == EngineMode::Triangular ? PoolLaw::Skewed : PoolLaw::CurrentBlock, cfg.flush_threshold),
        sink_(cfg.sink ? cfg.sink : &null_sink_),
        wants_fragments_(sink_->wants_fragments()),
        threads_(cfg.threads),
        pool_bufs_(cfg.threads, ThreadBuffer(n_blocks_)),
        bucket_bufs_(cfg.threads, ThreadBuffer(n_blocks_)),
        pending_(n_blocks_, false) {
    for (unsigned t = 0; t < cfg.threads; ++t) threads_[t].rng = SplitMix64(mix64(cfg.seed ^ (0xA5A5ull + t)));
  }

  Metrics run();

 private:
  double uniform(const WalkStartTable::Entry& e, hop_t hop, Stream s, ThreadState& ts) const {
    if (cfg_.deterministic) return draw_unit(RngKey{cfg_.seed, e.source, e.walk_index, hop}, s);
    return ts.rng.unit();
  }
  bool terminate(const WalkStartTable::Entry& e, hop_t hop, ThreadState& ts) const {
    const double r = cfg_.termination.kind == Termination::Kind::FixedLength ? 0.0 : uniform(e, hop, Stream::Terminate, ts);
    return should_terminate(cfg_.termination, hop, r);
  }

  bool advance(Cursor& c, const Resident& res, unsigned tid);
  Walk128 encode_cursor(const Cursor& c, block_t pre_block, block_t cur_block) const;
  Cursor decode_walk(const Walk128& w) const;

  template <class Fn>
  void parallel_for(std::size_t n, Fn&& fn);

  void initialize();
  void run_slot(block_t b);
  void process_bucket(block_t b, block_t i, const BlockData& current, const std::vector<Walk128>& bucket);
  void begin_sweep();
  void report(const SlotInfo& info) const {
    if (cfg_.on_slot) cfg_.on_slot(info);
  }
  std::uint64_t finished_so_far() const {
    std::uint64_t n = 0;
    for (const auto& t : threads_) n += t.finished;
    return n;
  }

  const GraphStore& store_;
  const EngineConfig& cfg_;
  WalkStartTable table_;
  block_t n_blocks_;
  ScratchDir scratch_;
  WalkPools pools_;
  NullSink null_sink_;
  WalkSink* sink_;
  bool wants_fragments_;
  std::vector<ThreadState> threads_;
  std::vector<ThreadBuffer> pool_bufs_;
  std::vector<ThreadBuffer> bucket_bufs_;

  Metrics m_;
  std::vector<bool> pending_;
  std::size_t pending_count_ = 0;
  std::uint64_t sweep_loads_ = 0;
};

template <class Fn>
void Engine::parallel_for(std::size_t n, Fn&& fn) {
  ErrorSlot err;
  const auto count = static_cast<std::int64_t>(n);
  const int nthreads = static_cast<int>(cfg_.threads);
#pragma omp parallel for schedule(dynamic, 256) num_threads(nthreads)
  for (std::int64_t k = 0; k < count; ++k) {
    if (err.failed()) continue;
    try {
      fn(static_cast<std::size_t>(k), static_cast<unsigned>(omp_get_thread_num()));
    } catch (...) {
      err.capture();
    }
  }
  err.rethrow();
}

bool Engine::advance(Cursor& c, const Resident& res, unsigned tid) {
  auto& ts = threads_[tid];
  const auto entry = table_.lookup(c.walk_id);
  const hop_t start_hop = c.hop;
  if (wants_fragments_) {
    ts.fragment.clear();
    ts.fragment.push_back(c.cur);
  }
  bool done = c.hop == 0 && terminate(entry, 0, ts);
  while (!done) {
    const AdjacencySlice v_adj = res.adjacency(c.cur);
    if (v_adj.degree() == 0) {
      done = true;
      break;
    }
    const double r = uniform(entry, c.hop, Stream::Step, ts);
    const vertex_t next = cfg_.model.second_order() && c.hop > 0
                              ? node2vec_next(c.pre, v_adj, res.adjacency(c.pre), cfg_.model.params, r)
                              : deepwalk_next(v_adj, r);
    c.pre = c.cur;
    c.cur = next;
    ++c.hop;
    ++ts.steps;
    if (wants_fragments_) ts.fragment.push_back(next);
    if (terminate(entry, c.hop, ts)) {
      done = true;
      break;
    }
    if (!res.contains(next)) break;
  }
  if (wants_fragments_) sink_->fragment(tid, c.walk_id, start_hop, ts.fragment);
  if (done) {
    sink_->finish(tid, c.walk_id, entry.source, c.cur);
    ++ts.finished;
  }
  return done;
}

Walk128 Engine::encode_cursor(const Cursor& c, block_t pre_block, block_t cur_block) const {
  WalkFields f;
  f.source = c.walk_id;
  f.pre_block = pre_block;
  f.cur_block = cur_block;
  f.pre_offset = static_cast<std::uint32_t>(c.pre - store_.block_start(pre_block));
  f.cur_offset = static_cast<std::uint32_t>(c.cur - store_.block_start(cur_block));
  f.hop = c.hop;
  return encode(f);
}

Cursor Engine::decode_walk(const Walk128& w) const {
  const WalkFields f = decode(w);
  const auto starts = store_.start_vertices();
  return {f.source, global_vertex(f.pre_offset, f.pre_block, starts), global_vertex(f.cur_offset, f.cur_block, starts),
          f.hop};
}

void Engine::initialize() {
  struct Item {
    std::uint64_t walk_id;
    vertex_t source;
  };
  std::vector<std::vector<std::size_t>> by_block(n_blocks_);
  const auto starts = table_.starts();
  for (std::size_t k = 0; k < starts.size(); ++k) {
    if (starts[k].walk_count > 0) by_block[store_.block_of(starts[k].source)].push_back(k);
  }
  std::vector<std::uint64_t> first_id(starts.size() + 1, 0);
  for (std::size_t k = 0; k < starts.size(); ++k) first_id[k + 1] = first_id[k] + starts[k].walk_count;

  const PoolLaw law = pools_.law();
  for (block_t blk = 0; blk < n_blocks_; ++blk) {
    if (by_block[blk].empty()) continue;
    std::vector<Item> items;
    for (auto k : by_block[blk]) {
      for (std::uint64_t j = 0; j < starts[k].walk_count; ++j) items.push_back({first_id[k] + j, starts[k].source});
    }
    const auto t0 = Clock::now();
    auto data = store_.load_block_full(blk);
    const auto t1 = Clock::now();
    m_.load_seconds += seconds(t1 - t0);
    ++m_.init_block_loads;
    const Resident res{data.get(), nullptr};
    parallel_for(items.size(), [&](std::size_t k, unsigned tid) {
      Cursor c{items[k].walk_id, kNoVertex, items[k].source, 0};
      if (advance(c, res, tid)) return;
      const Walk128 w = encode_cursor(c, blk, store_.block_of(c.cur));
      pool_bufs_[tid].append(pool_for(w, law), w);
    });
    m_.execute_seconds += seconds(Clock::now() - t1);
    data.reset();
    merge_buffers_into_pools(pool_bufs_, pools_);
  }
}

void Engine::begin_sweep() {
  pending_count_ = 0;
  for (block_t k = 0; k < n_blocks_; ++k) {
    pending_[k] = pools_.size(k) > 0;
    pending_count_ += pending_[k];
  }
}

void Engine::process_bucket(block_t b, block_t i, const BlockData& current, const std::vector<Walk128>& bucket) {
  const vertex_t n_v = store_.block_span(i);
  LoadMode mode = LoadMode::Full;
  if (cfg_.loading == LoadingPolicy::AlwaysOnDemand) {
    mode = LoadMode::OnDemand;
  } else if (cfg_.loading == LoadingPolicy::Learned) {
    mode = cfg_.loader->choose_mode(i, bucket.size(), n_v);
  }

  const auto t0 = Clock::now();
  std::unique_ptr<BlockData> anc;
  if (mode == LoadMode::OnDemand) {
    const vertex_t base = store_.block_start(i);
    const bool second_order = cfg_.model.second_order();
    std::vector<vertex_t> activated;
    activated.reserve(bucket.size());
    for (const auto& w : bucket) {
      const WalkFields f = decode(w);
      if (f.cur_block == i) activated.push_back(base + f.cur_offset);
      if (second_order && f.pre_block == i) activated.push_back(base + f.pre_offset);
    }
    anc = store_.load_block_on_demand(i, activated);
    ++m_.ancillary_ondemand_loads;
  } else {
    anc = store_.load_block_full(i);
    ++m_.ancillary_full_loads;
  }
  ++sweep_loads_;
  const auto t1 = Clock::now();

  const Resident res{&current, anc.get()};
  const EngineMode engine_mode = cfg_.mode;
  parallel_for(bucket.size(), [&](std::size_t k, unsigned tid) {
    const Walk128& w = bucket[k];
    const block_t pb = w.pre_block(), cb = w.cur_block();
    if (!((pb == b && cb == i) || (pb == i && cb == b))) {
      throw std::logic_error(fmt::format("walk with blocks ({}, {}) in bucket ({}, {})", pb, cb, b, i));
    }
    Cursor c = decode_walk(w);
    if (advance(c, res, tid)) return;
    const block_t pre_block = res.find(c.pre)->id();
    const block_t cur_block = store_.block_of(c.cur);
    const Walk128 out = encode_cursor(c, pre_block, cur_block);
    const Route r = route_exit(engine_mode, b, i, pre_block, cur_block);
    (r.kind == Route::Kind::Bucket ? bucket_bufs_ : pool_bufs_)[tid].append(r.target, out);
  });
  const auto t2 = Clock::now();
  m_.load_seconds += seconds(t1 - t0);
  m_.execute_seconds += seconds(t2 - t1);

  m_.io_utilization.push_back({m_.time_slots, b, i, mode, bucket.size(), anc->loaded_bytes(), anc->touched_bytes()});
  if (cfg_.samples) {
    LoadSample s{i, mode, static_cast<double>(bucket.size()) / static_cast<double>(n_v), seconds(t2 - t0)};
    if (cfg_.timing) s.total_time = cfg_.timing(s);
    cfg_.samples->record(s);
  }
}

void Engine::run_slot(block_t b) {
  const bool triangular = cfg_.mode == EngineMode::Triangular;
  auto walks = pools_.load_walks(b);
  auto buckets = collect_buckets(walks, b, n_blocks_, triangular ? BucketRule::Triangular : BucketRule::PlainBucket);
  std::vector<Walk128>().swap(walks);

  const auto t0 = Clock::now();
  auto current = store_.load_block_full(b);
  m_.load_seconds += seconds(Clock::now() - t0);
  ++m_.current_block_loads;
  ++sweep_loads_;

  std::vector<block_t> ancillary;
  for (block_t i = triangular ? b + 1 : 0; i < n_blocks_; ++i) {
    if (i == b) continue;
    if (triangular) merge_buffers_into_bucket(bucket_bufs_, i, buckets[i]);
    if (buckets[i].empty()) continue;
    process_bucket(b, i, *current, buckets[i]);
    ancillary.push_back(i);
    std::vector<Walk128>().swap(buckets[i]);
  }
  current.reset();
  for (const auto& buf : bucket_bufs_) {
    if (buf.size() != 0) throw std::logic_error("bucket buffers not drained at the end of a time slot");
  }
  merge_buffers_into_pools(pool_bufs_, pools_);

  SlotInfo info;
  info.slot = m_.time_slots++;
  info.current = b;
  info.ancillary = ancillary;
  if (pending_[b]) {
    pending_[b] = false;
    --pending_count_;
  }
  if (pending_count_ == 0) {
    m_.sweep_block_loads.push_back(sweep_loads_);
    sweep_loads_ = 0;
    ++m_.sweeps;
    info.sweep_completed = true;
    begin_sweep();
  }
  info.sweeps = m_.sweeps;
  info.pools = &pools_;
  info.walks_started = m_.walks_started;
  info.walks_finished = finished_so_far();
  spdlog::debug("slot {}: current {} ancillary {} pooled {} finished {}", info.slot, b, ancillary.size(),
                pools_.total(), info.walks_finished);
  report(info);
}

Metrics Engine::run() {
  const auto wall0 = Clock::now();
  const IoStats io0 = store_.io_stats();
  m_.walks_started = table_.total();
  if (m_.walks_started == 0) throw std::invalid_argument("no walks to run");
  if (m_.walks_started > (std::uint64_t{1} << kSourceBits)) throw std::invalid_argument("too many walks");
  for (const auto& s : table_.starts()) {
    if (s.source >= store_.vertex_count()) {
      throw std::out_of_range(fmt::format("start vertex {} >= vertex_count {}", s.source, store_.vertex_count()));
    }
  }

  sink_->begin(m_.walks_started, cfg_.threads);
  initialize();
  m_.init_seconds = seconds(Clock::now() - wall0);
  {
    SlotInfo info;
    info.initialization = true;
    info.pools = &pools_;
    info.walks_started = m_.walks_started;
    info.walks_finished = finished_so_far();
    report(info);
  }

  begin_sweep();
  const block_t range =
      cfg_.mode == EngineMode::Triangular ? std::max<block_t>(1, n_blocks_ - 1) : n_blocks_;
  Scheduler scheduler(cfg_.effective_scheduler(), range, cfg_.seed, cfg_.gwmix_prob);
  while (pools_.total() > 0) {
    const auto b = scheduler.next(pools_);
    if (!b) break;
    run_slot(*b);
  }
  sink_->end();

  for (const auto& t : threads_) {
    m_.steps_sampled += t.steps;
    m_.walks_finished += t.finished;
  }
  if (m_.walks_finished != m_.walks_started) {
    throw std::logic_error(fmt::format("{} walks started but {} finished", m_.walks_started, m_.walks_finished));
  }
  const IoStats io = store_.io_stats() - io0;
  m_.block_io_count = io.block_io_count;
  m_.block_io_bytes = io.block_io_bytes;
  m_.ondemand_io_count = io.ondemand_io_count;
  m_.ondemand_io_bytes = io.ondemand_io_bytes;
  m_.vertex_io_count = io.vertex_io_count;
  m_.vertex_io_bytes = io.vertex_io_bytes;
  m_.walk_io_bytes = pools_.load_bytes();
  m_.walk_flush_bytes = pools_.flush_bytes();
  m_.wall_seconds = seconds(Clock::now() - wall0);
  spdlog::info("run finished: {} walks, {} steps, {} slots, {} block loads, {:.3f}s", m_.walks_finished,
               m_.steps_sampled, m_.time_slots, m_.block_loads(), m_.wall_seconds);
  return m_;
}

}  // namespace

Metrics run(const GraphStore& store, std::span<const WalkStart> starts, const EngineConfig& cfg) {
  cfg.validate();
  Engine engine(store, starts, cfg);
  return engine.run();
}

}  // namespace grasorw
