#include <immintrin.h>

#include "grasorw/kernels.hpp"

namespace grasorw::simd::avx2 {

namespace {

inline __m256i load4(const void* p) { return _mm256_loadu_si256(static_cast<const __m256i*>(p)); }

inline unsigned lane_mask(__m256i m) {
  return static_cast<unsigned>(_mm256_movemask_pd(_mm256_castsi256_pd(m)));
}

}  // namespace

// Merges the two sorted lists four entries at a time. Each block of v_nbrs is
// compared against all four rotations of the current u_nbrs block, and matches
// accumulate until the v block is exhausted.
void classify_hops(vertex_t u, std::span<const vertex_t> v_nbrs, std::span<const vertex_t> u_nbrs,
                   std::uint8_t* out) {
  const std::size_t nv = v_nbrs.size();
  const std::size_t nu = u_nbrs.size();
  const __m256i uu = _mm256_set1_epi64x(static_cast<long long>(u));
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0, j = 0;
  while (i + 4 <= nv && j + 4 <= nu) {
    const __m256i a = load4(v_nbrs.data() + i);
    const __m256i b = load4(u_nbrs.data() + j);
    __m256i m = _mm256_cmpeq_epi64(a, b);
    m = _mm256_or_si256(m, _mm256_cmpeq_epi64(a, _mm256_permute4x64_epi64(b, _MM_SHUFFLE(0, 3, 2, 1))));
    m = _mm256_or_si256(m, _mm256_cmpeq_epi64(a, _mm256_permute4x64_epi64(b, _MM_SHUFFLE(1, 0, 3, 2))));
    m = _mm256_or_si256(m, _mm256_cmpeq_epi64(a, _mm256_permute4x64_epi64(b, _MM_SHUFFLE(2, 1, 0, 3))));
    acc = _mm256_or_si256(acc, m);

    const vertex_t amax = v_nbrs[i + 3];
    const vertex_t bmax = u_nbrs[j + 3];
    if (amax <= bmax) {
      const unsigned hit = lane_mask(acc);
      const unsigned self = lane_mask(_mm256_cmpeq_epi64(a, uu));
      for (unsigned k = 0; k < 4; ++k) {
        out[i + k] = (self >> k & 1u) ? 0 : ((hit >> k & 1u) ? 1 : 2);
      }
      i += 4;
      acc = _mm256_setzero_si256();
    }
    if (bmax <= amax) j += 4;
  }
  if (i < nv) scalar::classify_hops(u, v_nbrs.subspan(i), u_nbrs, out + i);
}

void extract_blocks(std::span<const Walk128> walks, block_t* pre, block_t* cur) {
  const std::size_t n = walks.size();
  const __m256i field = _mm256_set1_epi64x(0x3FF);
  const __m256i pack = _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256i a = load4(&walks[k]);
    const __m256i b = load4(&walks[k + 2]);
    // unpackhi yields the high words in order 0, 2, 1, 3.
    const __m256i hi = _mm256_permute4x64_epi64(_mm256_unpackhi_epi64(a, b), _MM_SHUFFLE(3, 1, 2, 0));
    const __m256i p = _mm256_and_si256(_mm256_srli_epi64(hi, 34), field);
    const __m256i c = _mm256_and_si256(_mm256_srli_epi64(hi, 44), field);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(pre + k),
                     _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(p, pack)));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(cur + k),
                     _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(c, pack)));
  }
  scalar::extract_blocks(walks.subspan(k), pre + k, cur + k);
}

}  // namespace grasorw::simd::avx2
