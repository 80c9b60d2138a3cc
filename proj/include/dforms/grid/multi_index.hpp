#pragma once

#include <vector>

/// Sign table shared by wedge, Hodge star and interior product.
///
/// A basis element dx^{i1} ^ ... ^ dx^{ik} (i1 < ... < ik) is encoded as the
/// bitmask with bits i1..ik set. Components of a degree-k form are stored in
/// lexicographic order of the sorted index tuples, e.g. for n = 3, k = 2:
/// (01, 02, 12).
namespace dforms::multi_index {

int binomial(int n, int k);

/// Basis masks of degree k in dimension n, in storage order.
const std::vector<unsigned>& basis(int n, int k);

/// Storage position of `mask` among the degree-|mask| basis of dimension n.
int position(int n, unsigned mask);

int popcount(unsigned mask);

/// Sign s with dx^a ^ dx^b = s dx^(a|b); 0 when a and b share an index.
int shuffle_sign(unsigned a, unsigned b);

/// Sign s with dx^i ^ dx^mask = s dx^(mask | bit i); 0 if i is in mask.
int insert_sign(int i, unsigned mask);

/// Sign s with star(dx^mask) = s dx^(complement).
int hodge_sign(int n, unsigned mask);

unsigned full_mask(int n);

/// Pointwise wedge of coefficient vectors in the storage basis.
std::vector<double> wedge(int n, int k, const std::vector<double>& a, int l,
                          const std::vector<double>& b);

/// Pointwise Hodge star of a coefficient vector in the storage basis.
std::vector<double> hodge(int n, int k, const std::vector<double>& a);

}  // namespace dforms::multi_index
