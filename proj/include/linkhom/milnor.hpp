#pragma once

#include <optional>
#include <vector>

#include "linkhom/magnus.hpp"
#include "linkhom/words.hpp"

namespace linkhom {

// The fixed normal generating set that Milnor relators are taken over.
struct GeneratorContext {
	std::vector<Generator> meridians;
	std::optional<Generator> lambda;

	bool contains(Generator g) const;
	void require(Generator g) const; // throws std::invalid_argument
};

// [g_i, g_i^y] for the i-th context meridian (0-based).
Word milnor_relator(const GeneratorContext &ctx, size_t i, const Word &y);

// [[g_i, g_i^{y1}]^{z1}, [g_j, g_j^{y2}]^{z2}]; i == j allowed.
Word engel22_relator(const GeneratorContext &ctx, size_t i, const Word &y1,
                     const Word &z1, size_t j, const Word &y2, const Word &z2);

// Triviality in the free Milnor group, decided through the reduced-ring
// embedding: true iff the no-repeat expansion of w is 1.
bool is_milnor_trivial(const Word &w, const GeneratorContext &ctx);

// Sound necessary test for u = v modulo the normal closure of the
// (2,2)-relators: the expansion of u v^-1 under the plus policy is 1.
// One-sided: a `true` certifies nothing beyond the ring statement's converse
// direction never being needed here.
bool equiv22_check(const Word &u, const Word &v, const GeneratorContext &ctx);

// Minimal degree of a nonconstant term of the unfiltered expansion of w,
// truncated at `cap`; nullopt when no such term exists up to the cap.
// For free groups w lies in the k-th lower central term iff the result is
// >= k (or nullopt at cap >= k).
std::optional<int> lcs_degree(const Word &w, int cap);
// Same statement computed structurally; agrees with the word form but stays
// tractable on long products of conjugated commutators.
std::optional<int> lcs_degree(const CommExpr &e, int cap);

} // namespace linkhom
