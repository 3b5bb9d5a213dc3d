#include "linkhom/milnor.hpp"

#include <stdexcept>

namespace linkhom {

bool GeneratorContext::contains(Generator g) const {
	for (const Generator &m : meridians)
		if (m == g)
			return true;
	return lambda && *lambda == g;
}

void GeneratorContext::require(Generator g) const {
	if (!contains(g))
		throw std::invalid_argument("generator " + g.display() +
		                            " not in context");
}

Word milnor_relator(const GeneratorContext &ctx, size_t i, const Word &y) {
	if (i >= ctx.meridians.size())
		throw std::invalid_argument("meridian index out of range");
	Word gi(ctx.meridians[i]);
	return brack(gi, conj(gi, y));
}

Word engel22_relator(const GeneratorContext &ctx, size_t i, const Word &y1,
                     const Word &z1, size_t j, const Word &y2,
                     const Word &z2) {
	return brack(conj(milnor_relator(ctx, i, y1), z1),
	             conj(milnor_relator(ctx, j, y2), z2));
}

bool is_milnor_trivial(const Word &w, const GeneratorContext &) {
	return expand_word(w, RepeatPolicy::no_repeat()).is_one();
}

bool equiv22_check(const Word &u, const Word &v, const GeneratorContext &) {
	return expand_word(mul(u, inv(v)), RepeatPolicy::plus()).is_one();
}

namespace {

std::optional<int> first_degree(const Series &s) {
	for (const auto &t : s.terms())
		if (!t.mono.vars.empty())
			return static_cast<int>(t.mono.degree());
	return std::nullopt;
}

RepeatPolicy truncation(int cap) {
	RepeatPolicy p;
	p.default_cap = std::nullopt;
	p.global_degree_cap = cap;
	return p;
}

} // namespace

std::optional<int> lcs_degree(const Word &w, int cap) {
	return first_degree(expand_word(w, truncation(cap)));
}

std::optional<int> lcs_degree(const CommExpr &e, int cap) {
	return first_degree(expand_expr(e, truncation(cap)));
}

} // namespace linkhom
