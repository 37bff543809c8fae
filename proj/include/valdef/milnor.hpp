#pragma once

#include <valdef/quadform.hpp>
#include <valdef/valuation.hpp>

#include <string>
#include <vector>

namespace valdef::milnor {

using algebra::Elem;
using algebra::Field;

// formal Z/2 sum of r-tuples of nonzero field elements; equal tuples cancel
// in pairs, but no further normal form is attempted
struct SymbolSum {
    Field field;
    int r = 0;
    std::vector<std::vector<Elem>> terms;
};

SymbolSum make_symbol(const Field& field, int r, std::vector<std::vector<Elem>> tuples);
SymbolSum symbol_add(const SymbolSum& a, const SymbolSum& b);
// drops cancelling tuple pairs
SymbolSum symbol_cancel(const SymbolSum& s);
// drops tuples containing a square entry (multilinearity normalization;
// provided explicitly, never applied behind the caller's back)
SymbolSum drop_square_entries(const SymbolSum& s);
std::string symbol_str(const SymbolSum& s);

// boundary map at a non-archimedean place: rewrites each tuple into
// uniformizer-times-units shape and takes residues, one arity down
SymbolSum boundary(const SymbolSum& s, const valuation::Place& v);

// decides triviality where a decision procedure exists:
//   finite fields   any r (r = 0 parity, r = 1 squareness, r >= 2 zero)
//   Q               r <= 3 (squares / Hilbert symbols / real place)
//   F_q(t)          any r except r = 2 in characteristic 2
// anything else raises undecidable_error
bool is_trivial(const SymbolSum& s);

// places of Q carrying a nonzero local invariant of the pair (a,b)
struct LocalInvariantMap {
    std::vector<valuation::Place> odd_places;
};
LocalInvariantMap hbn_invariants(const Rat& a, const Rat& b);

// boundary at every place of F_q(t), norms down to F_q, multiplies; the
// product must land in the squares
bool reciprocity_check(const Elem& f, const Elem& g);

}  // namespace valdef::milnor
