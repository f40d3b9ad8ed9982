#pragma once

// Text formats: tuple files (lossless, 17 significant digits) and canonical
// invariant serializations (12 significant digits, diffable).

#include "subiso/algebra.hpp"
#include "subiso/core.hpp"
#include "subiso/lines.hpp"
#include "subiso/planes.hpp"
#include "subiso/tuple.hpp"

#include <string>
#include <variant>

namespace subiso {

using ParsedTuple = std::variant<SubspaceTuple<double>, SubspaceTuple<cplx>>;

// Tuple file layout:
//   subiso tuple v1
//   field real|complex
//   d <d>
//   n <n>
//   ranks r_1 ... r_n
//   n blocks of d rows, r_i values per row (complex entries as "re im").
// Serialization prints %.17g, so parse(serialize(t)) == t bitwise.
template <class T>
std::string serialize_tuple(const SubspaceTuple<T>& t);

ParsedTuple parse_tuple(const std::string& text);

Field parsed_field(const ParsedTuple& t);

// Canonical invariant texts, header "subiso invariant v1", values at %.12g.
template <class T>
std::string serialize_invariant(const LineInvariant<T>& inv);

std::string serialize_invariant(const CanonicalPlaneGramian& inv);

template <class T>
std::string serialize_invariant(const TraceInvariant<T>& inv);

}  // namespace subiso
