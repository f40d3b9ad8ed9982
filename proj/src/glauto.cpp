#include "subiso/glauto.hpp"

#include <cstdio>

namespace subiso {

int theoretical_nstar(int d, int r) {
  if (r <= 0 || d <= 0 || d % r != 0)
    throw InvalidInput("theoretical_nstar: requires r | d");
  const int q = d / r;
  if (q < 2) throw InvalidInput("theoretical_nstar: requires d/r >= 2");
  if (r == 1) return q + 1;
  return q == 2 ? q + 3 : q + 2;
}

NStarTable nstar_experiment(int d, int r, int n_max, int trials,
                            std::uint64_t seed, const Tolerances& tol) {
  if (n_max < 2 || trials < 1)
    throw InvalidInput("nstar_experiment: need n_max >= 2 and trials >= 1");
  if (r < 1 || r >= d) throw InvalidInput("nstar_experiment: need 1 <= r < d");
  NStarTable table;
  table.d = d;
  table.r = r;
  table.has_prediction = d % r == 0;
  if (table.has_prediction) table.n_star = theoretical_nstar(d, r);
  table.pass = true;
  for (int n = 2; n <= n_max; ++n) {
    NStarRow row;
    row.n = n;
    row.trials = trials;
    for (int trial = 0; trial < trials; ++trial) {
      SeededSource src(seed + 1000003ULL * static_cast<std::uint64_t>(n) +
                       static_cast<std::uint64_t>(trial));
      const SubspaceTuple<cplx> t =
          random_tuple<cplx>(d, std::vector<int>(n, r), src, tol);
      const StabilizerReport rep = stabilizer_dimension(t, tol);
      if (rep.trivially_stabilized) ++row.trivial;
      row.min_gap = std::min(row.min_gap, rep.spectral_gap);
      if (rep.ambiguous) table.pass = false;
    }
    row.fraction = static_cast<double>(row.trivial) / trials;
    if (table.has_prediction) {
      const double expected = n >= table.n_star ? 1.0 : 0.0;
      if (row.fraction != expected) table.pass = false;
    }
    table.rows.push_back(row);
  }
  if (!table.has_prediction) table.pass = false;
  return table;
}

std::string format_nstar_table(const NStarTable& table) {
  char buf[160];
  if (table.has_prediction)
    std::snprintf(buf, sizeof buf,
                  "stabilizer sweep: d=%d r=%d predicted n*=%d\n", table.d,
                  table.r, table.n_star);
  else
    std::snprintf(buf, sizeof buf,
                  "stabilizer sweep: d=%d r=%d (no theoretical prediction: r "
                  "does not divide d)\n",
                  table.d, table.r);
  std::string out = buf;
  out += "   n   trivial/trials   fraction      min gap\n";
  for (const auto& row : table.rows) {
    std::snprintf(buf, sizeof buf, "%4d   %7d/%-6d   %8.3f   %10.3g\n", row.n,
                  row.trivial, row.trials, row.fraction, row.min_gap);
    out += buf;
  }
  if (table.has_prediction)
    out += table.pass
               ? "result: PASS (sharp threshold at predicted n*)\n"
               : "result: FAIL (observed fractions deviate from prediction)\n";
  else
    out += "result: N/A (empirical table only)\n";
  return out;
}

}  // namespace subiso
