#include "grasorw/loader_model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace grasorw {

namespace fs = std::filesystem;

void SampleLog::record(const LoadSample& s) { samples_.push_back(s); }

std::vector<LoadSample> SampleLog::for_block(block_t b) const {
  std::vector<LoadSample> out;
  for (const auto& s : samples_) {
    if (s.block == b) out.push_back(s);
  }
  return out;
}

void SampleLog::save_csv(const fs::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot create '" + path.string() + "'");
  out << "block,mode,eta,total_time_seconds\n";
  for (const auto& s : samples_) {
    out << fmt::format("{},{},{:.17g},{:.17g}\n", s.block, to_string(s.mode), s.eta, s.total_time);
  }
  if (!out) throw Error("write failed on '" + path.string() + "'");
}

SampleLog SampleLog::load_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  SampleLog log;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && line.rfind("block", 0) == 0) continue;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string block, mode, eta, time;
    if (!std::getline(ss, block, ',') || !std::getline(ss, mode, ',') || !std::getline(ss, eta, ',') ||
        !std::getline(ss, time)) {
      throw Error(fmt::format("{}:{}: expected 4 fields", path.string(), lineno));
    }
    LoadSample s;
    try {
      s.block = static_cast<block_t>(std::stoul(block));
      s.eta = std::stod(eta);
      s.total_time = std::stod(time);
    } catch (const std::exception&) {
      throw Error(fmt::format("{}:{}: cannot parse '{}'", path.string(), lineno, line));
    }
    if (mode == "full") {
      s.mode = LoadMode::Full;
    } else if (mode == "ondemand") {
      s.mode = LoadMode::OnDemand;
    } else {
      throw Error(fmt::format("{}:{}: unknown mode '{}'", path.string(), lineno, mode));
    }
    log.record(s);
  }
  return log;
}

LoadMode BlockCostModel::choose(double eta) const {
  if (!eta0) return LoadMode::OnDemand;
  return eta > *eta0 ? LoadMode::Full : LoadMode::OnDemand;
}

std::optional<BlockCostModel> BlockCostModel::fit(std::span<const LoadSample> samples) {
  double n = 0, sx = 0, sy = 0;
  double sxx_o = 0, sxy_o = 0;
  for (const auto& s : samples) {
    if (s.mode == LoadMode::Full) {
      n += 1;
      sx += s.eta;
      sy += s.total_time;
    } else {
      sxx_o += s.eta * s.eta;
      sxy_o += s.eta * s.total_time;
    }
  }
  if (n < 2 || !(sxx_o > 0)) return std::nullopt;
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& s : samples) {
    if (s.mode != LoadMode::Full) continue;
    sxx += (s.eta - mx) * (s.eta - mx);
    sxy += (s.eta - mx) * (s.total_time - my);
  }
  if (!(sxx > 0)) return std::nullopt;

  BlockCostModel m;
  m.alpha_f = sxy / sxx;
  m.b_f = my - m.alpha_f * mx;
  m.alpha_o = sxy_o / sxx_o;
  if (m.alpha_o > m.alpha_f) m.eta0 = m.b_f / (m.alpha_o - m.alpha_f);
  m.sample_count = samples.size();
  return m;
}

LoaderModel LoaderModel::train(std::span<const LoadSample> samples, std::size_t min_block_samples) {
  LoaderModel model;
  model.global_ = BlockCostModel::fit(samples);
  std::map<block_t, std::vector<LoadSample>> by_block;
  for (const auto& s : samples) by_block[s.block].push_back(s);
  for (const auto& [b, list] : by_block) {
    if (list.size() < min_block_samples) continue;
    if (auto m = BlockCostModel::fit(list)) model.blocks_.emplace(b, *m);
  }
  return model;
}

const BlockCostModel* LoaderModel::model_for(block_t block) const {
  if (auto it = blocks_.find(block); it != blocks_.end()) return &it->second;
  return global_ ? &*global_ : nullptr;
}

LoadMode LoaderModel::choose_mode(block_t block, std::uint64_t walk_count, std::uint64_t n_v) const {
  if (n_v == 0) throw std::invalid_argument("choose_mode: block has no vertices");
  const auto* m = model_for(block);
  if (!m) return LoadMode::Full;
  return m->choose(static_cast<double>(walk_count) / static_cast<double>(n_v));
}

namespace {

nlohmann::json model_json(const BlockCostModel& m) {
  nlohmann::json j;
  j["alpha_f"] = m.alpha_f;
  j["b_f"] = m.b_f;
  j["alpha_o"] = m.alpha_o;
  j["eta0"] = m.eta0 ? nlohmann::json(*m.eta0) : nlohmann::json("degenerate");
  j["sample_count"] = m.sample_count;
  return j;
}

BlockCostModel model_from_json(const nlohmann::json& j) {
  BlockCostModel m;
  m.alpha_f = j.at("alpha_f").get<double>();
  m.b_f = j.at("b_f").get<double>();
  m.alpha_o = j.at("alpha_o").get<double>();
  if (const auto& e = j.at("eta0"); e.is_number()) m.eta0 = e.get<double>();
  m.sample_count = j.at("sample_count").get<std::size_t>();
  return m;
}

}  // namespace

nlohmann::json LoaderModel::to_json() const {
  nlohmann::json j;
  j["global"] = global_ ? model_json(*global_) : nlohmann::json(nullptr);
  j["fallback_full"] = fallback_only();
  auto blocks = nlohmann::json::array();
  for (const auto& [b, m] : blocks_) {
    auto rec = model_json(m);
    rec["block"] = b;
    blocks.push_back(std::move(rec));
  }
  j["blocks"] = std::move(blocks);
  return j;
}

LoaderModel LoaderModel::from_json(const nlohmann::json& j) {
  LoaderModel model;
  try {
    if (const auto& g = j.at("global"); !g.is_null()) model.global_ = model_from_json(g);
    for (const auto& rec : j.at("blocks")) model.blocks_.emplace(rec.at("block").get<block_t>(), model_from_json(rec));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed loader model: ") + e.what());
  }
  return model;
}

void LoaderModel::save(const fs::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot create '" + path.string() + "'");
  out << to_json().dump(2) << '\n';
  if (!out) throw Error("write failed on '" + path.string() + "'");
}

LoaderModel LoaderModel::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open loader model '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
  return from_json(j);
}

}  // namespace grasorw
