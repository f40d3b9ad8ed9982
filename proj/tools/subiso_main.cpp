// Command-line front end: compare tuples, emit canonical invariants,
// generate test instances, run the stabilizer sweep, inspect stabilizers.
// Exit codes: 0 = yes / success, 1 = no / FAIL, 2 = error, precondition
// failure, or indeterminate.

#include "CLI11.hpp"
#include "subiso/glauto.hpp"
#include "subiso/harness.hpp"
#include "subiso/io.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace subiso;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Tolerances parse_tolerance_profile(const std::string& profile) {
  Tolerances tol;
  if (profile.empty()) return tol;
  std::istringstream in(profile);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw InvalidInput("tolerance profile: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    char* end = nullptr;
    const std::string vs = item.substr(eq + 1);
    const double v = std::strtod(vs.c_str(), &end);
    if (end != vs.c_str() + vs.size())
      throw InvalidInput("tolerance profile: bad value for " + key);
    if (key == "rank_rel")
      tol.rank_rel = v;
    else if (key == "orth")
      tol.orth = v;
    else if (key == "sv_distinct")
      tol.sv_distinct = v;
    else if (key == "lex_quantum")
      tol.lex_quantum = v;
    else if (key == "trace_cmp")
      tol.trace_cmp = v;
    else
      throw InvalidInput("tolerance profile: unknown key '" + key + "'");
  }
  tol.validate();
  return tol;
}

UnitaryMethod method_from_name(const std::string& name) {
  if (name == "auto") return UnitaryMethod::auto_select;
  if (name == "lines") return UnitaryMethod::lines;
  if (name == "planes") return UnitaryMethod::planes;
  if (name == "projection") return UnitaryMethod::projection;
  if (name == "quiver") return UnitaryMethod::quiver;
  throw InvalidInput("unknown method: " + name);
}

std::string fmt_g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

int run_compare(const std::string& file_a, const std::string& file_b,
                const std::string& group, const std::string& method,
                const std::string& permutations, const Tolerances& tol) {
  const ParsedTuple pa = parse_tuple(read_file(file_a));
  const ParsedTuple pb = parse_tuple(read_file(file_b));
  if (parsed_field(pa) != parsed_field(pb)) {
    std::cout << "error: the two files use different scalar fields\n";
    return 2;
  }
  std::cout << "group: " << group << "\n";
  int code = 2;
  auto decide = [&](const auto& a, const auto& b) {
    if (group == "isometry") {
      if (permutations == "brute") {
        const auto perm =
            brute_force_permutation_isomorphic(a, b, IsoGroup::isometry, tol);
        std::cout << "method: brute-force permutation search (isometry)\n";
        if (perm) {
          std::cout << "decision: isomorphic\npermutation:";
          for (int p : *perm) std::cout << ' ' << p + 1;
          std::cout << "\n";
          code = 0;
        } else {
          std::cout << "decision: not isomorphic (no accepting permutation)\n";
          code = 1;
        }
        return;
      }
      const DecisionReport rep =
          subspaces_unitary_isomorphic(a, b, method_from_name(method), tol);
      std::cout << "method: " << rep.method << "\n";
      std::cout << "decision: " << (rep.isomorphic ? "isomorphic" : "not isomorphic")
                << "\ndetail: " << rep.detail << "\n";
      code = rep.isomorphic ? 0 : 1;
      return;
    }
    // group gl
    if (permutations == "brute") {
      const auto perm = brute_force_permutation_isomorphic(a, b, IsoGroup::gl, tol);
      std::cout << "method: brute-force permutation search (gl)\n";
      if (perm) {
        std::cout << "decision: isomorphic\npermutation:";
        for (int p : *perm) std::cout << ' ' << p + 1;
        std::cout << "\n";
        code = 0;
      } else {
        std::cout << "decision: not isomorphic (no accepting permutation)\n";
        code = 1;
      }
      return;
    }
    const auto cert = gl_isomorphism(a, b, tol);
    std::cout << "method: intertwiner nullspace\n";
    std::cout << "stabilizer dimension a: " << cert.stab_a.dimension
              << " (gap " << fmt_g(cert.stab_a.spectral_gap) << ")\n";
    std::cout << "stabilizer dimension b: " << cert.stab_b.dimension
              << " (gap " << fmt_g(cert.stab_b.spectral_gap) << ")\n";
    switch (cert.outcome) {
      case GLOutcome::isomorphic:
        std::cout << "decision: isomorphic\ndetail: " << cert.detail
                  << "\nmax residual angle: " << fmt_g(cert.max_residual_angle)
                  << "\n";
        code = 0;
        break;
      case GLOutcome::not_isomorphic:
        std::cout << "decision: not isomorphic\ndetail: " << cert.detail << "\n";
        code = 1;
        break;
      case GLOutcome::precondition_failed:
        std::cout << "decision: indeterminate\ndetail: " << cert.detail << "\n";
        code = 2;
        break;
    }
  };
  if (std::holds_alternative<SubspaceTuple<double>>(pa))
    decide(std::get<SubspaceTuple<double>>(pa), std::get<SubspaceTuple<double>>(pb));
  else
    decide(std::get<SubspaceTuple<cplx>>(pa), std::get<SubspaceTuple<cplx>>(pb));
  return code;
}

int run_invariant(const std::string& file, const std::string& method,
                  const Tolerances& tol) {
  const ParsedTuple pt = parse_tuple(read_file(file));
  std::string text;
  auto emit = [&](const auto& t) {
    if (method == "lines") {
      text = serialize_invariant(line_invariant(line_tuple_from_subspaces(t, tol), tol));
    } else if (method == "projection") {
      text = serialize_invariant(projection_invariant(t, tol));
    } else if (method == "quiver") {
      text = serialize_invariant(quiver_invariant(t, tol));
    } else {
      throw InvalidInput("unknown method: " + method);
    }
  };
  if (method == "planes") {
    if (!std::holds_alternative<SubspaceTuple<double>>(pt))
      throw InapplicableMethod("planes method requires the real field");
    const auto& t = std::get<SubspaceTuple<double>>(pt);
    text = serialize_invariant(
        canonical_plane_gramian(plane_gramian_from_bases(t, tol), tol));
  } else if (std::holds_alternative<SubspaceTuple<double>>(pt)) {
    emit(std::get<SubspaceTuple<double>>(pt));
  } else {
    emit(std::get<SubspaceTuple<cplx>>(pt));
  }
  std::cout << text;
  return 0;
}

std::vector<int> parse_ranks(const std::string& spec) {
  std::vector<int> ranks;
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    char* end = nullptr;
    const long v = std::strtol(item.c_str(), &end, 10);
    if (end != item.c_str() + item.size() || v < 1)
      throw InvalidInput("bad ranks list: " + spec);
    ranks.push_back(static_cast<int>(v));
  }
  if (ranks.empty()) throw InvalidInput("empty ranks list");
  return ranks;
}

int run_gen(const std::string& kind, const std::string& field, int d,
            const std::string& ranks_spec, int r, int n,
            const std::string& graph_file, int eps, std::uint64_t seed) {
  if (kind == "random") {
    std::vector<int> ranks;
    if (!ranks_spec.empty())
      ranks = parse_ranks(ranks_spec);
    else if (r >= 1 && n >= 1)
      ranks.assign(n, r);
    else
      throw InvalidInput("gen random: provide --ranks or both --r and --n");
    SeededSource src(seed);
    if (field == "real")
      std::cout << serialize_tuple(random_tuple<double>(d, ranks, src));
    else
      std::cout << serialize_tuple(random_tuple<cplx>(d, ranks, src));
    return 0;
  }
  if (kind == "graph-unitary" || kind == "graph-gl") {
    if (graph_file.empty()) throw InvalidInput("gen: --graph is required");
    const SimpleGraph g = parse_graph(read_file(graph_file));
    if (kind == "graph-unitary") {
      if (field == "real")
        std::cout << serialize_tuple(graph_to_tuple_unitary<double>(g, r));
      else
        std::cout << serialize_tuple(graph_to_tuple_unitary<cplx>(g, r));
    } else {
      if (field == "real")
        std::cout << serialize_tuple(graph_to_tuple_gl<double>(g));
      else
        std::cout << serialize_tuple(graph_to_tuple_gl<cplx>(g));
    }
    return 0;
  }
  if (kind == "adversarial") {
    if (field != "real")
      throw InvalidInput("gen adversarial: the family is real");
    const LineTuple<double> lines = adversarial_line_family(d, eps);
    SubspaceTuple<double> t;
    t.d = d;
    for (const auto& v : lines.vectors) t.bases.push_back(v);
    std::cout << serialize_tuple(t);
    return 0;
  }
  throw InvalidInput("unknown gen kind: " + kind);
}

int run_nstar(int r, int d, int n_max, int trials, std::uint64_t seed,
              const Tolerances& tol) {
  if (n_max <= 0) n_max = (d % r == 0 ? theoretical_nstar(d, r) : d / r + 2) + 2;
  const NStarTable table = nstar_experiment(d, r, n_max, trials, seed, tol);
  std::cout << format_nstar_table(table);
  if (!table.has_prediction) return 0;
  return table.pass ? 0 : 1;
}

int run_stabilizer(const std::string& file, const Tolerances& tol) {
  const ParsedTuple pt = parse_tuple(read_file(file));
  StabilizerReport rep;
  if (std::holds_alternative<SubspaceTuple<double>>(pt))
    rep = stabilizer_dimension(std::get<SubspaceTuple<double>>(pt), tol);
  else
    rep = stabilizer_dimension(std::get<SubspaceTuple<cplx>>(pt), tol);
  std::cout << "stabilizer dimension: " << rep.dimension << "\n"
            << "trivially stabilized: " << (rep.trivially_stabilized ? "yes" : "no")
            << "\n"
            << "smallest kept singular value: " << fmt_g(rep.smallest_kept_sv)
            << "\n"
            << "largest discarded singular value: "
            << fmt_g(rep.largest_discarded_sv) << "\n"
            << "spectral gap: " << fmt_g(rep.spectral_gap) << "\n";
  if (rep.ambiguous) {
    std::cout << "warning: spectral gap below 1e3; the dimension is ambiguous\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"subspace-tuple isomorphism toolkit"};
  app.require_subcommand(1);

  std::string tol_profile;
  app.add_option("--tolerance-profile", tol_profile,
                 "comma-separated overrides, e.g. rank_rel=1e-10,orth=1e-8");

  auto* compare = app.add_subcommand("compare", "decide isomorphism of two tuple files");
  std::string file_a, file_b, group = "isometry", method = "auto",
              permutations = "none";
  compare->add_option("file_a", file_a)->required();
  compare->add_option("file_b", file_b)->required();
  compare->add_option("--group", group, "isometry | gl")
      ->check(CLI::IsMember({"isometry", "gl"}));
  compare->add_option("--method", method,
                      "auto | lines | planes | projection | quiver (isometry only)")
      ->check(CLI::IsMember({"auto", "lines", "planes", "projection", "quiver"}));
  compare->add_option("--permutations", permutations,
                      "none = fixed order, brute = search over relabelings")
      ->check(CLI::IsMember({"none", "brute"}));

  auto* invariant = app.add_subcommand("invariant", "print a canonical invariant");
  std::string inv_file, inv_method;
  invariant->add_option("file", inv_file)->required();
  invariant->add_option("--method", inv_method, "lines | planes | projection | quiver")
      ->required()
      ->check(CLI::IsMember({"lines", "planes", "projection", "quiver"}));

  auto* gen = app.add_subcommand("gen", "generate a tuple file on stdout");
  std::string kind, field = "real", ranks_spec, graph_file;
  int d = 0, r = 0, n = 0, eps = 1;
  std::uint64_t seed = 1;
  gen->add_option("--kind", kind, "random | graph-unitary | graph-gl | adversarial")
      ->required()
      ->check(CLI::IsMember({"random", "graph-unitary", "graph-gl", "adversarial"}));
  gen->add_option("--field", field)->check(CLI::IsMember({"real", "complex"}));
  gen->add_option("--d", d, "ambient dimension");
  gen->add_option("--ranks", ranks_spec, "comma-separated ranks, e.g. 2,2,2");
  gen->add_option("--r", r, "uniform rank");
  gen->add_option("--n", n, "number of subspaces");
  gen->add_option("--graph", graph_file, "graph file for the reductions");
  gen->add_option("--eps", eps, "+1 or -1 for the adversarial family");
  gen->add_option("--seed", seed);

  auto* nstar = app.add_subcommand("nstar", "trivial-stabilizer threshold sweep");
  int ns_r = 0, ns_d = 0, ns_nmax = 0, ns_trials = 20;
  std::uint64_t ns_seed = 7;
  nstar->add_option("--r", ns_r)->required();
  nstar->add_option("--d", ns_d)->required();
  nstar->add_option("--n-max", ns_nmax, "largest n (default: predicted n* + 2)");
  nstar->add_option("--trials", ns_trials);
  nstar->add_option("--seed", ns_seed);

  auto* stab = app.add_subcommand("stabilizer", "print the stabilizer report");
  std::string stab_file;
  stab->add_option("file", stab_file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_name() == "CallForHelp" ? 0 : 2;
  }

  try {
    const Tolerances tol = parse_tolerance_profile(tol_profile);
    if (compare->parsed())
      return run_compare(file_a, file_b, group, method, permutations, tol);
    if (invariant->parsed()) return run_invariant(inv_file, inv_method, tol);
    if (gen->parsed())
      return run_gen(kind, field, d, ranks_spec, r, n, graph_file, eps, seed);
    if (nstar->parsed())
      return run_nstar(ns_r, ns_d, ns_nmax, ns_trials, ns_seed, tol);
    if (stab->parsed()) return run_stabilizer(stab_file, tol);
  } catch (const NotNowhereOrthogonal& e) {
    std::cerr << "error: " << e.what()
              << "\nsuggestion: retry with --method quiver\n";
    return 2;
  } catch (const InapplicableMethod& e) {
    std::cerr << "error: " << e.what()
              << "\nsuggestion: retry with --method quiver\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
