#include "grasorw/synthetic.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "grasorw/rng.hpp"

namespace grasorw::synthetic {

namespace {

// Visits each index of [0, m) independently with probability p.
template <class Fn>
void bernoulli_indices(std::uint64_t m, double p, std::mt19937_64& gen, Fn&& fn) {
  if (m == 0 || p <= 0.0) return;
  if (p >= 1.0) {
    for (std::uint64_t k = 0; k < m; ++k) fn(k);
    return;
  }
  const double log_q = std::log1p(-p);
  double pos = -1.0;
  for (;;) {
    const double r = to_unit(gen());
    pos += 1.0 + std::floor(std::log1p(-r) / log_q);
    if (pos >= static_cast<double>(m)) return;
    fn(static_cast<std::uint64_t>(pos));
  }
}

// Index of the pair (v, w), w < v, in row-major lower-triangle order.
std::pair<vertex_t, vertex_t> triangle_pair(std::uint64_t k) {
  auto v = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(k))) / 2.0);
  while (v > 1 && v * (v - 1) / 2 > k) --v;
  while ((v + 1) * v / 2 <= k) ++v;
  return {v, k - v * (v - 1) / 2};
}

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability outside [0, 1]");
}

}  // namespace

EdgeList erdos_renyi(vertex_t n, double avg_degree, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("erdos_renyi needs n >= 1");
  EdgeList list;
  list.vertex_count = n;
  if (n < 2) return list;
  const double p = avg_degree / static_cast<double>(n - 1);
  check_probability(p);
  std::mt19937_64 gen(seed);
  const std::uint64_t pairs = n * (n - 1) / 2;
  list.edges.reserve(static_cast<std::size_t>(static_cast<double>(pairs) * p * 1.05) + 16);
  bernoulli_indices(pairs, p, gen, [&](std::uint64_t k) {
    auto [v, w] = triangle_pair(k);
    list.edges.push_back({w, v});
  });
  return list;
}

EdgeList star(vertex_t leaves) {
  EdgeList list;
  list.vertex_count = leaves + 1;
  for (vertex_t v = 1; v <= leaves; ++v) list.edges.push_back({0, v});
  return list;
}

EdgeList two_community(vertex_t n, double p_in, double p_out, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("two_community needs n >= 1");
  check_probability(p_in);
  check_probability(p_out);
  EdgeList list;
  list.vertex_count = n;
  std::mt19937_64 gen(seed);
  const vertex_t half = n / 2;
  const vertex_t sizes[2] = {half, n - half};
  const vertex_t base[2] = {0, half};
  for (int c = 0; c < 2; ++c) {
    const vertex_t s = sizes[c];
    if (s < 2) continue;
    bernoulli_indices(s * (s - 1) / 2, p_in, gen, [&](std::uint64_t k) {
      auto [v, w] = triangle_pair(k);
      list.edges.push_back({base[c] + w, base[c] + v});
    });
  }
  bernoulli_indices(sizes[0] * sizes[1], p_out, gen, [&](std::uint64_t k) {
    list.edges.push_back({k / sizes[1], half + k % sizes[1]});
  });
  return list;
}

}  // namespace grasorw::synthetic
