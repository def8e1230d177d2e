#pragma once

// Contraction bookkeeping behind wick_normal_moment. Exposed so the cycle
// tables can be tested on their own.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace twinbeam::wick {

enum class OpKind : std::uint8_t { signal_create, idler_create, idler_annihilate, signal_annihilate };

struct Operator {
  OpKind kind;
  int variable;  // integration variable shared by exactly one creator/annihilator pair
};

/// a_s^dag(x_1..x_n) a_i^dag(y_1..y_m) a_i(y_m..y_1) a_s(x_n..x_1), variables
/// numbered 0..n-1 for signal and n..n+m-1 for idler.
std::vector<Operator> normal_ordered_product(int n, int m);

/// Oriented correlator matrices. `T` suffix = transpose; Mc = elementwise
/// conjugate of the pair matrix, McT = its adjoint.
enum class Factor : std::uint8_t { Ns, NsT, Ni, NiT, M, MT, Mc, McT };

Factor transpose(Factor f) noexcept;
const char* name(Factor f) noexcept;

/// Matrix W with W(var_p, var_q) = <op_p op_q>, for p ordered before q.
/// Returns false when the contraction vanishes identically.
bool contraction(OpKind first, OpKind second, Factor& out) noexcept;

using Matching = std::vector<std::pair<int, int>>;

/// All perfect matchings with no identically vanishing pair, in a fixed
/// lexicographic order.
std::vector<Matching> nonzero_matchings(std::span<const Operator> ops);

using Cycle = std::vector<Factor>;

/// Splits the multigraph (matching edges + shared-variable edges) into
/// closed cycles. The moment contribution of the matching is the product of
/// Tr(F_1 F_2 ... F_k) over cycles.
std::vector<Cycle> contraction_cycles(std::span<const Operator> ops, const Matching& matching);

/// Key invariant under cyclic rotation and under reversal with transposition,
/// both of which leave the trace unchanged.
std::string canonical_key(const Cycle& cycle);

}  // namespace twinbeam::wick
