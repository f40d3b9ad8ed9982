#include "subiso/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace subiso {

namespace {

std::string fmt(double x, const char* spec) {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

std::string f17(double x) {
  if (!std::isfinite(x)) throw InvalidInput("serialize: non-finite value");
  return fmt(x, "%.17g");
}

std::string f12(double x) {
  if (!std::isfinite(x)) throw InvalidInput("serialize: non-finite value");
  return fmt(x, "%.12g");
}

void put17(std::string& out, double x) { out += f17(x); }
void put17(std::string& out, const cplx& x) {
  out += f17(x.real());
  out += ' ';
  out += f17(x.imag());
}
void put12(std::string& out, double x) { out += f12(x); }
void put12(std::string& out, const cplx& x) {
  out += f12(x.real());
  out += ' ';
  out += f12(x.imag());
}

class Tokens {
 public:
  explicit Tokens(const std::string& text) : in_(text) {}

  std::string word(const char* what) {
    std::string t;
    if (!(in_ >> t))
      throw ParseError(std::string("tuple file: missing ") + what);
    return t;
  }

  void expect(const char* lit) {
    const std::string t = word(lit);
    if (t != lit)
      throw ParseError(std::string("tuple file: expected '") + lit +
                       "', got '" + t + "'");
  }

  int integer(const char* what) {
    const std::string t = word(what);
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size())
      throw ParseError(std::string("tuple file: bad integer for ") + what);
    return static_cast<int>(v);
  }

  double number(const char* what) {
    const std::string t = word(what);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || !std::isfinite(v))
      throw ParseError(std::string("tuple file: bad numeric value in ") + what);
    return v;
  }

  void finish() {
    std::string t;
    if (in_ >> t)
      throw ParseError("tuple file: trailing content '" + t + "'");
  }

 private:
  std::istringstream in_;
};

template <class T>
SubspaceTuple<T> parse_blocks(Tokens& tk, int d, const std::vector<int>& ranks) {
  SubspaceTuple<T> t;
  t.d = d;
  for (int r : ranks) {
    Mat<T> basis(d, r);
    for (int row = 0; row < d; ++row)
      for (int col = 0; col < r; ++col) {
        if constexpr (scalar_traits<T>::field == Field::real) {
          basis(row, col) = tk.number("matrix block");
        } else {
          const double re = tk.number("matrix block");
          const double im = tk.number("matrix block");
          basis(row, col) = cplx(re, im);
        }
      }
    t.bases.push_back(std::move(basis));
  }
  return t;
}

}  // namespace

template <class T>
std::string serialize_tuple(const SubspaceTuple<T>& t) {
  if (t.d <= 0 || t.bases.empty())
    throw InvalidInput("serialize_tuple: empty tuple");
  std::string out = "subiso tuple v1\nfield ";
  out += scalar_traits<T>::name;
  out += "\nd " + std::to_string(t.d) + "\nn " + std::to_string(t.n()) +
         "\nranks";
  for (const auto& b : t.bases) {
    if (b.rows() != t.d || b.cols() < 1)
      throw ShapeMismatch("serialize_tuple: basis shape");
    out += ' ';
    out += std::to_string(b.cols());
  }
  out += '\n';
  for (const auto& b : t.bases)
    for (Eigen::Index row = 0; row < b.rows(); ++row) {
      for (Eigen::Index col = 0; col < b.cols(); ++col) {
        if (col) out += ' ';
        put17(out, b(row, col));
      }
      out += '\n';
    }
  return out;
}

template std::string serialize_tuple<double>(const SubspaceTuple<double>&);
template std::string serialize_tuple<cplx>(const SubspaceTuple<cplx>&);

ParsedTuple parse_tuple(const std::string& text) {
  Tokens tk(text);
  tk.expect("subiso");
  tk.expect("tuple");
  tk.expect("v1");
  tk.expect("field");
  const std::string field = tk.word("field tag");
  if (field != "real" && field != "complex")
    throw ParseError("tuple file: field must be real or complex");
  tk.expect("d");
  const int d = tk.integer("d");
  tk.expect("n");
  const int n = tk.integer("n");
  if (d < 1 || n < 1) throw ParseError("tuple file: d and n must be positive");
  tk.expect("ranks");
  std::vector<int> ranks(n);
  for (int i = 0; i < n; ++i) {
    ranks[i] = tk.integer("ranks");
    if (ranks[i] < 1 || ranks[i] > d)
      throw ParseError("tuple file: ranks must satisfy 1 <= r <= d");
  }
  ParsedTuple out;
  if (field == "real")
    out = parse_blocks<double>(tk, d, ranks);
  else
    out = parse_blocks<cplx>(tk, d, ranks);
  tk.finish();
  return out;
}

Field parsed_field(const ParsedTuple& t) {
  return std::holds_alternative<SubspaceTuple<double>>(t) ? Field::real
                                                          : Field::complex;
}

namespace {

std::string invariant_header(const char* method, const char* field) {
  return std::string("subiso invariant v1\nmethod ") + method + "\nfield " +
         field + "\n";
}

void put_edges(std::string& out, const char* tag,
               const std::vector<std::pair<int, int>>& edges) {
  out += tag;
  out += " e=" + std::to_string(edges.size()) + "\n";
  for (const auto& [i, j] : edges)
    out += std::to_string(i + 1) + " " + std::to_string(j + 1) + "\n";
}

}  // namespace

template <class T>
std::string serialize_invariant(const LineInvariant<T>& inv) {
  std::string out = invariant_header("lines", scalar_traits<T>::name);
  out += "n " + std::to_string(inv.graph.n) + "\n";
  put_edges(out, "frame-graph", inv.graph.edges);
  put_edges(out, "forest", inv.forest.forest_edges);
  out += "cycles c=" + std::to_string(inv.forest.cycles.size()) + "\n";
  for (const auto& cyc : inv.forest.cycles) {
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      if (i) out += ' ';
      out += std::to_string(cyc[i] + 1);
    }
    out += '\n';
  }
  out += "two-products\n";
  for (Eigen::Index i = 0; i < inv.two_products.rows(); ++i) {
    for (Eigen::Index j = 0; j < inv.two_products.cols(); ++j) {
      if (j) out += ' ';
      put12(out, inv.two_products(i, j));
    }
    out += '\n';
  }
  out += "cycle-products\n";
  for (const auto& p : inv.cycle_products) {
    put12(out, p);
    out += '\n';
  }
  return out;
}

template std::string serialize_invariant<double>(const LineInvariant<double>&);
template std::string serialize_invariant<cplx>(const LineInvariant<cplx>&);

std::string serialize_invariant(const CanonicalPlaneGramian& inv) {
  std::string out = invariant_header("planes", "real");
  out += "n " + std::to_string(inv.g.rows() / 2) + "\n";
  out += std::string("branch ") + plane_branch_name(inv.branch) + "\n";
  out += "canonical-gramian rows=" + std::to_string(inv.g.rows()) + "\n";
  for (Eigen::Index i = 0; i < inv.g.rows(); ++i) {
    for (Eigen::Index j = 0; j < inv.g.cols(); ++j) {
      if (j) out += ' ';
      put12(out, inv.g(i, j));
    }
    out += '\n';
  }
  return out;
}

template <class T>
std::string serialize_invariant(const TraceInvariant<T>& inv) {
  std::string out = invariant_header(inv.method.c_str(), scalar_traits<T>::name);
  out += "k " + std::to_string(inv.k) + "\n";
  out += "generators g=" +
         std::to_string(inv.generator_traces.cols()) + "\n";
  if (!inv.generator_supports.empty())
    put_edges(out, "generator-supports", inv.generator_supports);
  out += "words m=" + std::to_string(inv.words.size()) + "\n";
  for (const auto& w : inv.words) {
    if (w.empty()) {
      out += "e\n";
      continue;
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) out += ' ';
      out += std::to_string(w[i] + 1);
    }
    out += '\n';
  }
  if (!inv.word_supports.empty())
    put_edges(out, "word-supports", inv.word_supports);
  out += "pair-traces\n";
  for (Eigen::Index i = 0; i < inv.pair_traces.rows(); ++i) {
    for (Eigen::Index j = 0; j < inv.pair_traces.cols(); ++j) {
      if (j) out += ' ';
      put12(out, inv.pair_traces(i, j));
    }
    out += '\n';
  }
  out += "generator-traces\n";
  for (Eigen::Index i = 0; i < inv.generator_traces.rows(); ++i) {
    for (Eigen::Index j = 0; j < inv.generator_traces.cols(); ++j) {
      if (j) out += ' ';
      put12(out, inv.generator_traces(i, j));
    }
    out += '\n';
  }
  out += "triple-traces t=" + std::to_string(inv.triple_traces.size()) + "\n";
  for (const auto& [i, j, l, v] : inv.triple_traces) {
    out += std::to_string(i + 1) + " " + std::to_string(j + 1) + " " +
           std::to_string(l + 1) + " ";
    put12(out, v);
    out += '\n';
  }
  return out;
}

template std::string serialize_invariant<double>(const TraceInvariant<double>&);
template std::string serialize_invariant<cplx>(const TraceInvariant<cplx>&);

}  // namespace subiso
