#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "linkhom/engel.hpp"
#include "linkhom/links.hpp"
#include "linkhom/words.hpp"

namespace linkhom {

// Three-component base with the two satellite slots filled by the given
// winding-zero patterns; the remaining longitude reads the bracket of the two
// pattern meridian classes.
LinkPresentation motivating_example(const Pattern &p1, const Pattern &p2);

// --- geometric realization ---------------------------------------------------

// Pattern whose meridian class mirrors the bracket tree of `shape`; one
// component per leaf, in left-to-right leaf order. Leaves must be Gen or flat
// Prod-of-letters nodes; a Prod leaf still yields a single component.
Pattern bracket_pattern(const CommExpr &shape);

// Realization of an almost basic commutator by a single-band chain: the two
// doubled slots are carried by one component (band-merged), so the pattern is
// h-trivial in its torus; the essential version reappears once a parallel
// copy of that component is added. Returns the pattern plus, for each slot of
// the commutator, the index of the carrying component.
struct AlmostBasicRealization {
	Pattern pattern;
	std::vector<size_t> slot_component; // slot -> component index
	size_t doubled; // component carrying both doubled slots
};
AlmostBasicRealization almost_basic_pattern(const AlmostBasic &c);

// --- stabilization -----------------------------------------------------------

struct BandInstruction {
	std::string from; // surviving component (base side)
	std::string to;   // absorbed component (stabilizer side)
	Word conjugator;  // exact word; only its homology class is essential
};

// One product factor assigned to a torus: its slots are realized as a
// Bing-doubled core copy whose halves carry the two slot links.
struct TorusFactor {
	BracketFactor factor;
	size_t torus = 0; // 0 or 1
	std::vector<std::string> left_components;  // leaf order
	std::vector<std::string> right_components; // leaf order
};

struct StabilizationPlan {
	LinkPresentation base; // distinguished component 0 plus the rest
	int k = 4;
	bool fivefold = false;
	std::optional<Lemma52Result> cert;
	std::vector<TorusFactor> factors;
	Pattern k0;                        // the full stabilizer in its torus
	std::vector<Pattern> constituents; // per-factor slot patterns, for audit
	// Which constituents realize an almost basic commutator; only those are
	// individually h-trivial in their torus (plain Bing trees are not; the
	// composite is what the plus check certifies).
	std::vector<bool> constituent_basic;
	LinkPresentation assembled; // base with the stabilizer inserted, pre-band
	std::vector<std::string> copies; // components copied before banding
	std::vector<BandInstruction> bands;
};

struct BuildOptions {
	// Number of product factors kept per torus; 0 keeps the full certified
	// list. The default single factor exercises every construction path.
	int factors_per_torus = 1;
	bool fivefold = false;
	uint64_t seed = 0;
};

// Requires component 0's longitude to parse as [[a1,b1],[a2,b2]] with each
// half decomposable over its own support. Throws std::invalid_argument on a
// malformed base.
StabilizationPlan build_stabilization(const LinkPresentation &base, int k,
                                      const BuildOptions &opts = {});

// Parallel copies, then the planned band sums; result is the banded link.
LinkPresentation apply_bands(const StabilizationPlan &plan);

// Shifts one band conjugator by a meridian (a homology-class change); used as
// a negative control.
StabilizationPlan sabotage_band(const StabilizationPlan &plan, size_t band);

// Small end-to-end instances: component 0 bracket [[a1,b1],[a2,b2]] where
// each a_i is realized by an h-trivial chain plus parallel copy (so its
// decomposition is a single almost basic term) and each b_i is a plain
// Bing tree. fivefold prepends a generator entry to every half.
LinkPresentation scaled_instance(bool fivefold = false);

// --- verification ------------------------------------------------------------

enum class VerifyMode : uint8_t { LsharpCopies, K0Plus, L0Copy };

struct CheckResult {
	std::string name;
	bool pass = true;
	std::string witness; // empty when passing
};

struct VerifyReport {
	std::string instance;
	uint64_t seed = 0;
	std::string mode;
	std::vector<CheckResult> checks;
	double seconds = 0.0;

	bool pass() const;
};

VerifyReport verify_theorem1(const StabilizationPlan &plan, VerifyMode mode,
                             int jobs = 1);

// --- relative slice export ---------------------------------------------------

struct RelSliceProblem {
	LinkPresentation j_side; // banded curves
	LinkPresentation k_side; // zero-framed handle curves
	std::map<std::string, std::string> ownership; // component -> tag
};

RelSliceProblem export_relative_slice(const LinkPresentation &banded,
                                      const StabilizationPlan &plan);

} // namespace linkhom
