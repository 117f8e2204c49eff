#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "grasorw/types.hpp"

namespace grasorw {

struct LoadSample {
  block_t block = 0;
  LoadMode mode = LoadMode::Full;
  double eta = 0.0;         // walks in the bucket / vertices in the block
  double total_time = 0.0;  // seconds spent loading and executing the bucket
};

/// Append-only sample log with CSV persistence
/// (`block,mode,eta,total_time_seconds`).
class SampleLog {
 public:
  void record(const LoadSample& s);
  const std::vector<LoadSample>& samples() const { return samples_; }
  std::vector<LoadSample> for_block(block_t b) const;
  void clear() { samples_.clear(); }

  void save_csv(const std::filesystem::path& path) const;
  static SampleLog load_csv(const std::filesystem::path& path);

 private:
  std::vector<LoadSample> samples_;
};

/// t_f = alpha_f * eta + b_f for full loads, t_o = alpha_o * eta for
/// on-demand loads. The threshold is the crossing point of the two lines.
struct BlockCostModel {
  double alpha_f = 0.0;
  double b_f = 0.0;
  double alpha_o = 0.0;
  std::optional<double> eta0;  // empty when alpha_o <= alpha_f
  std::size_t sample_count = 0;

  bool degenerate() const { return !eta0.has_value(); }
  double full_time(double eta) const { return alpha_f * eta + b_f; }
  double ondemand_time(double eta) const { return alpha_o * eta; }
  LoadMode choose(double eta) const;

  /// Needs two full samples with distinct eta and an on-demand sample with
  /// eta > 0; returns nullopt otherwise.
  static std::optional<BlockCostModel> fit(std::span<const LoadSample> samples);
};

class LoaderModel {
 public:
  static constexpr std::size_t kMinBlockSamples = 8;

  /// Fits one model per block with enough samples plus a pooled model.
  static LoaderModel train(std::span<const LoadSample> samples, std::size_t min_block_samples = kMinBlockSamples);

  /// Full iff eta = walk_count / n_v exceeds the block's threshold. Without
  /// any usable model the answer is Full.
  LoadMode choose_mode(block_t block, std::uint64_t walk_count, std::uint64_t n_v) const;

  /// Model consulted for `block`: per-block, else pooled, else null.
  const BlockCostModel* model_for(block_t block) const;
  const std::optional<BlockCostModel>& global() const { return global_; }
  const std::map<block_t, BlockCostModel>& blocks() const { return blocks_; }
  bool fallback_only() const { return !global_ && blocks_.empty(); }

  nlohmann::json to_json() const;
  static LoaderModel from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static LoaderModel load(const std::filesystem::path& path);

 private:
  std::map<block_t, BlockCostModel> blocks_;
  std::optional<BlockCostModel> global_;
};

}  // namespace grasorw
