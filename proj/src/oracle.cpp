#include "decisive/oracle.hpp"

#include <cmath>
#include <map>
#include <set>

namespace decisive::oracle {

namespace {

// States from which `goal` is reachable (goal states included).
std::vector<bool> can_reach(const FiniteChain& fc, const std::vector<bool>& goal) {
  std::vector<std::vector<std::size_t>> pred(fc.size());
  for (std::size_t s = 0; s < fc.size(); ++s) {
    for (const auto& [t, p] : fc.rows[s]) pred[t].push_back(s);
  }
  std::vector<bool> out(fc.size(), false);
  std::deque<std::size_t> queue;
  for (std::size_t s = 0; s < fc.size(); ++s) {
    if (goal[s]) {
      out[s] = true;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    std::size_t s = queue.front();
    queue.pop_front();
    for (std::size_t p : pred[s]) {
      if (!out[p]) {
        out[p] = true;
        queue.push_back(p);
      }
    }
  }
  return out;
}

void check_size(const FiniteChain& fc, const std::vector<bool>& f) {
  if (f.size() != fc.size()) fail(ErrorCode::InvalidArgument, "state set size does not match the chain");
}

}  // namespace

std::size_t FiniteChain::add_state(std::string label) {
  rows.emplace_back();
  target.push_back(false);
  avoid.push_back(false);
  avoid2.push_back(std::nullopt);
  labels.push_back(std::move(label));
  return rows.size() - 1;
}

void FiniteChain::add_edge(std::size_t from, std::size_t to, const Rational& p) {
  if (from >= size() || to >= size()) fail(ErrorCode::InvalidArgument, "edge refers to an unknown state");
  for (auto& [t, q] : rows[from]) {
    if (t == to) {
      q += p;
      return;
    }
  }
  rows[from].emplace_back(to, p);
}

void FiniteChain::check() const {
  if (initial >= size()) fail(ErrorCode::InvalidArgument, "initial state out of range");
  for (std::size_t s = 0; s < size(); ++s) {
    Rational sum(0);
    for (const auto& [t, p] : rows[s]) {
      if (t >= size()) fail(ErrorCode::InvalidArgument, "edge refers to an unknown state");
      if (p <= 0) fail(ErrorCode::InvalidArgument, "non-positive transition probability");
      sum += p;
    }
    if (sum != 1) {
      fail(ErrorCode::InvalidArgument, "row " + std::to_string(s) + " sums to " + to_fraction(sum));
    }
  }
}

std::vector<Rational> absorption_probabilities(const FiniteChain& fc, const std::vector<bool>& goal) {
  check_size(fc, goal);
  const std::size_t n = fc.size();
  const std::vector<bool> reach = can_reach(fc, goal);

  // Unknowns: states that can reach the goal without being in it.
  std::vector<std::size_t> var(n, n);
  std::vector<std::size_t> states;
  for (std::size_t s = 0; s < n; ++s) {
    if (reach[s] && !goal[s]) {
      var[s] = states.size();
      states.push_back(s);
    }
  }
  const std::size_t m = states.size();

  // Sparse system (I - P) x = b, eliminated in index order without pivoting:
  // I - P restricted to these states is a nonsingular M-matrix, whose
  // pivots stay positive.
  std::vector<std::map<std::size_t, Rational>> row(m);
  std::vector<std::set<std::size_t>> col(m);
  std::vector<Rational> rhs(m, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    row[i][i] += 1;
    col[i].insert(i);
    for (const auto& [t, p] : fc.rows[states[i]]) {
      if (goal[t]) {
        rhs[i] += p;
      } else if (var[t] != n) {
        row[i][var[t]] -= p;
        col[var[t]].insert(i);
      }
    }
  }

  for (std::size_t i = 0; i < m; ++i) {
    auto pivot_it = row[i].find(i);
    if (pivot_it == row[i].end() || pivot_it->second == 0) {
      fail(ErrorCode::SingularSystem, "absorption system is singular (malformed chain)");
    }
    const Rational pivot = pivot_it->second;
    std::vector<std::size_t> below;
    for (std::size_t k : col[i]) {
      if (k > i) below.push_back(k);
    }
    for (std::size_t k : below) {
      auto it = row[k].find(i);
      if (it == row[k].end()) continue;
      const Rational factor = it->second / pivot;
      for (const auto& [j, v] : row[i]) {
        Rational& cell = row[k][j];
        cell -= factor * v;
        if (cell == 0) {
          row[k].erase(j);
          col[j].erase(k);
        } else {
          col[j].insert(k);
        }
      }
      rhs[k] -= factor * rhs[i];
    }
  }

  std::vector<Rational> x(m, Rational(0));
  for (std::size_t i = m; i-- > 0;) {
    Rational acc = rhs[i];
    for (const auto& [j, v] : row[i]) {
      if (j > i) acc -= v * x[j];
    }
    x[i] = acc / row[i].at(i);
  }

  std::vector<Rational> out(n, Rational(0));
  for (std::size_t s = 0; s < n; ++s) {
    if (goal[s]) {
      out[s] = 1;
    } else if (var[s] != n) {
      out[s] = x[var[s]];
    }
  }
  return out;
}

Band exact_reach_prob(const FiniteChain& fc, const std::vector<bool>& f) {
  check_size(fc, f);
  std::vector<bool> goal = f;
  if (fc.overflow) goal[*fc.overflow] = false;
  const Rational lower = absorption_probabilities(fc, goal)[fc.initial];
  if (!fc.overflow) return {lower, lower};
  goal[*fc.overflow] = true;
  return {lower, absorption_probabilities(fc, goal)[fc.initial]};
}

Band exact_reach_prob(const FiniteChain& fc) { return exact_reach_prob(fc, fc.target); }

std::vector<std::vector<std::size_t>> bottom_sccs(const FiniteChain& fc) {
  // Iterative Tarjan.
  const std::size_t n = fc.size();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> comps;
  std::size_t counter = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    std::vector<std::pair<std::size_t, std::size_t>> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, edge] = call.back();
      if (edge < fc.rows[v].size()) {
        const std::size_t w = fc.rows[v][edge].first;
        ++edge;
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::size_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        std::vector<std::size_t> c;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = comps.size();
          c.push_back(w);
        } while (w != done);
        comps.push_back(std::move(c));
      }
    }
  }

  std::vector<std::vector<std::size_t>> bottoms;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    bool bottom = true;
    for (std::size_t s : comps[c]) {
      for (const auto& [t, p] : fc.rows[s]) {
        if (comp[t] != c) bottom = false;
      }
    }
    if (bottom) {
      std::sort(comps[c].begin(), comps[c].end());
      bottoms.push_back(comps[c]);
    }
  }
  std::sort(bottoms.begin(), bottoms.end());
  return bottoms;
}

Band exact_repeat_reach_prob(const FiniteChain& fc, const std::vector<bool>& f) {
  check_size(fc, f);
  std::vector<bool> good(fc.size(), false);
  for (const auto& scc : bottom_sccs(fc)) {
    bool meets = false;
    for (std::size_t s : scc) {
      if (f[s] && s != fc.overflow) meets = true;
    }
    if (!meets) continue;
    for (std::size_t s : scc) good[s] = true;
  }
  const Rational lower = absorption_probabilities(fc, good)[fc.initial];
  if (!fc.overflow) return {lower, lower};
  good[*fc.overflow] = true;
  return {lower, absorption_probabilities(fc, good)[fc.initial]};
}

Band exact_repeat_reach_prob(const FiniteChain& fc) { return exact_repeat_reach_prob(fc, fc.target); }

std::vector<bool> unreachable_set(const FiniteChain& fc, const std::vector<bool>& f) {
  check_size(fc, f);
  std::vector<bool> out = can_reach(fc, f);
  out.flip();
  return out;
}

ExplicitChain::ExplicitChain(FiniteChain fc) : fc_(std::move(fc)) {
  fc_.check();
  avoid_ = unreachable_set(fc_, fc_.target);
  avoid2_ = unreachable_set(fc_, avoid_);
}

Distribution<std::size_t> ExplicitChain::successors(std::size_t s) const {
  DistributionBuilder<std::size_t> builder;
  for (const auto& [t, p] : fc_.rows[s]) builder.add(t, p);
  return std::move(builder).build();
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t runs, double z) {
  if (runs == 0) return {0.0, 1.0};
  const double n = static_cast<double>(runs);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  double lower = std::max(0.0, centre - half);
  double upper = std::min(1.0, centre + half);
  if (successes == runs) upper = 1.0;
  if (successes == 0) lower = 0.0;
  return {lower, upper};
}

}  // namespace decisive::oracle
