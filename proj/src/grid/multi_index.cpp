#include "dforms/grid/multi_index.hpp"

#include "dforms/core/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <string>

namespace dforms::multi_index {

namespace {

constexpr int kMaxDim = 8;

std::vector<unsigned> build_basis(int n, int k) {
  std::vector<unsigned> out;
  // Enumerate sorted k-tuples in lexicographic order.
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  if (k == 0) return {0u};
  while (true) {
    unsigned m = 0;
    for (int i : idx) m |= 1u << i;
    out.push_back(m);
    int p = k - 1;
    while (p >= 0 && idx[p] == n - k + p) --p;
    if (p < 0) break;
    ++idx[p];
    for (int q = p + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
  }
  return out;
}

}  // namespace

int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

const std::vector<unsigned>& basis(int n, int k) {
  static const auto table = [] {
    std::array<std::array<std::vector<unsigned>, kMaxDim + 1>, kMaxDim + 1> t;
    for (int nn = 0; nn <= kMaxDim; ++nn)
      for (int kk = 0; kk <= nn; ++kk) t[nn][kk] = build_basis(nn, kk);
    return t;
  }();
  if (n < 0 || n > kMaxDim || k < 0 || k > n) {
    throw DegreeError("no basis for degree " + std::to_string(k) + " in dimension " +
                      std::to_string(n));
  }
  return table[n][k];
}

int popcount(unsigned mask) { return std::popcount(mask); }

int position(int n, unsigned mask) {
  const auto& b = basis(n, popcount(mask));
  const auto it = std::find(b.begin(), b.end(), mask);
  if (it == b.end()) throw DegreeError("mask outside dimension");
  return static_cast<int>(it - b.begin());
}

int shuffle_sign(unsigned a, unsigned b) {
  if (a & b) return 0;
  // Count inversions: pairs (p in a, q in b) with p > q.
  int inv = 0;
  for (unsigned bb = b; bb; bb &= bb - 1) {
    const int q = std::countr_zero(bb);
    inv += std::popcount(a >> (q + 1));
  }
  return (inv & 1) ? -1 : 1;
}

int insert_sign(int i, unsigned mask) {
  if (mask & (1u << i)) return 0;
  const int below = std::popcount(mask & ((1u << i) - 1u));
  return (below & 1) ? -1 : 1;
}

unsigned full_mask(int n) { return (1u << n) - 1u; }

int hodge_sign(int n, unsigned mask) { return shuffle_sign(mask, full_mask(n) & ~mask); }

std::vector<double> wedge(int n, int k, const std::vector<double>& a, int l,
                          const std::vector<double>& b) {
  if (k + l > n) throw DegreeError("wedge degree overflow");
  const auto& ba = basis(n, k);
  const auto& bb = basis(n, l);
  std::vector<double> out(binomial(n, k + l), 0.0);
  for (std::size_t p = 0; p < ba.size(); ++p)
    for (std::size_t q = 0; q < bb.size(); ++q) {
      const int s = shuffle_sign(ba[p], bb[q]);
      if (s != 0) out[position(n, ba[p] | bb[q])] += s * a[p] * b[q];
    }
  return out;
}

std::vector<double> hodge(int n, int k, const std::vector<double>& a) {
  const auto& bk = basis(n, k);
  std::vector<double> out(binomial(n, n - k), 0.0);
  for (std::size_t p = 0; p < bk.size(); ++p) {
    const unsigned c = full_mask(n) & ~bk[p];
    out[position(n, c)] = hodge_sign(n, bk[p]) * a[p];
  }
  return out;
}

}  // namespace dforms::multi_index
