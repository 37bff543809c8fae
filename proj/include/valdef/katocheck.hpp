#pragma once

#include <valdef/milnor.hpp>

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace valdef::katocheck {

using algebra::Field;

// the two residue complexes small enough to exercise on a desk: the
// projective line over an odd finite field, and the integers of Q
struct SchemeTag {
    enum class Kind { p1_over_fq, spec_of_q_integers };
    Kind kind;
    Int q;  // p1 only
};

SchemeTag scheme_p1(const Int& q);
SchemeTag scheme_spec_z();

struct KatoComplexInstance {
    SchemeTag tag;
    Field function_field;  // F_q(t), or Q for the integer instance
};

// materializes the bottom two levels plus the augmentation; higher levels
// are deliberately out of reach
KatoComplexInstance build_kc(const SchemeTag& tag);
std::string instance_str(const KatoComplexInstance& inst);

// composed boundary (residues, then norms down to the constants / the
// invariant sum) must vanish on every sample; any failure is reported with
// the full residue trace
nlohmann::json check_complex(const KatoComplexInstance& inst,
                             const std::vector<milnor::SymbolSum>& samples);

// two-way exactness at the middle level: local triviality must coincide with
// the global decision, with a second decision route cross-checked on
// single-tuple samples. Patterns (rational instance only) ask for a
// quaternion symbol realizing a prescribed set of nonzero local invariants;
// bounded search, "inconclusive" when the budget runs out
nlohmann::json check_exactness(const KatoComplexInstance& inst,
                               const std::vector<milnor::SymbolSum>& samples,
                               const std::vector<std::vector<valuation::Place>>& patterns = {},
                               long realization_budget = 4096);

}  // namespace valdef::katocheck
