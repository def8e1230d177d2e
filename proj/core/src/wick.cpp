#include "twinbeam/wick.hpp"

#include "twinbeam/error.hpp"

#include <algorithm>

namespace twinbeam::wick {

std::vector<Operator> normal_ordered_product(int n, int m) {
  if (n < 0 || m < 0) throw InvalidArgument("normal_ordered_product: negative order");
  std::vector<Operator> ops;
  ops.reserve(static_cast<std::size_t>(2 * (n + m)));
  for (int k = 0; k < n; ++k) ops.push_back({OpKind::signal_create, k});
  for (int k = 0; k < m; ++k) ops.push_back({OpKind::idler_create, n + k});
  for (int k = m - 1; k >= 0; --k) ops.push_back({OpKind::idler_annihilate, n + k});
  for (int k = n - 1; k >= 0; --k) ops.push_back({OpKind::signal_annihilate, k});
  return ops;
}

Factor transpose(Factor f) noexcept {
  switch (f) {
    case Factor::Ns: return Factor::NsT;
    case Factor::NsT: return Factor::Ns;
    case Factor::Ni: return Factor::NiT;
    case Factor::NiT: return Factor::Ni;
    case Factor::M: return Factor::MT;
    case Factor::MT: return Factor::M;
    case Factor::Mc: return Factor::McT;
    case Factor::McT: return Factor::Mc;
  }
  return f;
}

const char* name(Factor f) noexcept {
  switch (f) {
    case Factor::Ns: return "Ns";
    case Factor::NsT: return "NsT";
    case Factor::Ni: return "Ni";
    case Factor::NiT: return "NiT";
    case Factor::M: return "M";
    case Factor::MT: return "MT";
    case Factor::Mc: return "Mc";
    case Factor::McT: return "McT";
  }
  return "?";
}

bool contraction(OpKind first, OpKind second, Factor& out) noexcept {
  using K = OpKind;
  // <a_s^dag(x) a_s(x')> = Ns(x', x)
  if (first == K::signal_create && second == K::signal_annihilate) { out = Factor::NsT; return true; }
  if (first == K::idler_create && second == K::idler_annihilate) { out = Factor::NiT; return true; }
  // <a_s^dag(x) a_i^dag(y)> = conj(M(x, y))
  if (first == K::signal_create && second == K::idler_create) { out = Factor::Mc; return true; }
  if (first == K::idler_create && second == K::signal_create) { out = Factor::McT; return true; }
  // <a_s(x) a_i(y)> = M(x, y)
  if (first == K::signal_annihilate && second == K::idler_annihilate) { out = Factor::M; return true; }
  if (first == K::idler_annihilate && second == K::signal_annihilate) { out = Factor::MT; return true; }
  // Same-beam squeezing, cross-beam <a_s^dag a_i>, and anti-normally
  // ordered pairs do not occur.
  return false;
}

namespace {

void extend_matchings(std::span<const Operator> ops, std::vector<bool>& used, Matching& current,
                      std::vector<Matching>& out) {
  const auto first = std::find(used.begin(), used.end(), false);
  if (first == used.end()) {
    out.push_back(current);
    return;
  }
  const auto p = static_cast<int>(first - used.begin());
  used[static_cast<std::size_t>(p)] = true;
  for (int q = p + 1; q < static_cast<int>(ops.size()); ++q) {
    if (used[static_cast<std::size_t>(q)]) continue;
    Factor f;
    if (!contraction(ops[static_cast<std::size_t>(p)].kind, ops[static_cast<std::size_t>(q)].kind, f)) continue;
    used[static_cast<std::size_t>(q)] = true;
    current.emplace_back(p, q);
    extend_matchings(ops, used, current, out);
    current.pop_back();
    used[static_cast<std::size_t>(q)] = false;
  }
  used[static_cast<std::size_t>(p)] = false;
}

}  // namespace

std::vector<Matching> nonzero_matchings(std::span<const Operator> ops) {
  std::vector<Matching> out;
  if (ops.size() % 2 != 0) return out;
  std::vector<bool> used(ops.size(), false);
  Matching current;
  extend_matchings(ops, used, current, out);
  return out;
}

std::vector<Cycle> contraction_cycles(std::span<const Operator> ops, const Matching& matching) {
  const std::size_t count = ops.size();
  std::vector<int> partner(count, -1);
  for (const auto& [p, q] : matching) {
    partner[static_cast<std::size_t>(p)] = q;
    partner[static_cast<std::size_t>(q)] = p;
  }
  std::vector<int> same_variable(count, -1);
  for (std::size_t p = 0; p < count; ++p) {
    for (std::size_t q = p + 1; q < count; ++q) {
      if (ops[p].variable == ops[q].variable) {
        same_variable[p] = static_cast<int>(q);
        same_variable[q] = static_cast<int>(p);
      }
    }
  }
  for (std::size_t p = 0; p < count; ++p) {
    if (partner[p] < 0 || same_variable[p] < 0) {
      throw InvalidArgument("contraction_cycles: incomplete matching or unpaired variable");
    }
  }

  std::vector<bool> visited(count, false);
  std::vector<Cycle> cycles;
  for (std::size_t start = 0; start < count; ++start) {
    if (visited[start]) continue;
    Cycle cycle;
    auto v = static_cast<int>(start);
    while (true) {
      const int w = partner[static_cast<std::size_t>(v)];
      visited[static_cast<std::size_t>(v)] = true;
      visited[static_cast<std::size_t>(w)] = true;
      Factor f;
      if (v < w) {
        if (!contraction(ops[static_cast<std::size_t>(v)].kind, ops[static_cast<std::size_t>(w)].kind, f)) {
          throw InvalidArgument("contraction_cycles: matching contains a vanishing pair");
        }
      } else {
        if (!contraction(ops[static_cast<std::size_t>(w)].kind, ops[static_cast<std::size_t>(v)].kind, f)) {
          throw InvalidArgument("contraction_cycles: matching contains a vanishing pair");
        }
        f = transpose(f);
      }
      cycle.push_back(f);
      const int next = same_variable[static_cast<std::size_t>(w)];
      if (next == static_cast<int>(start)) break;
      v = next;
    }
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

std::string canonical_key(const Cycle& cycle) {
  const auto encode = [](const Cycle& c, std::size_t shift) {
    std::string key;
    key.reserve(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
      key.push_back(static_cast<char>('a' + static_cast<int>(c[(k + shift) % c.size()])));
    }
    return key;
  };
  Cycle reversed(cycle.rbegin(), cycle.rend());
  for (auto& f : reversed) f = transpose(f);

  std::string best;
  for (std::size_t shift = 0; shift < cycle.size(); ++shift) {
    for (const Cycle* c : {&cycle, static_cast<const Cycle*>(&reversed)}) {
      std::string key = encode(*c, shift);
      if (best.empty() || key < best) best = std::move(key);
    }
  }
  return best;
}

}  // namespace twinbeam::wick
