#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "linkhom/words.hpp"

namespace linkhom {

// Thrown when a fixed-width coefficient would wrap. All arithmetic is exact
// or it fails loudly.
struct OverflowError : std::runtime_error {
	OverflowError() : std::runtime_error("integer overflow in coefficient") {}
};

int64_t checked_add(int64_t a, int64_t b);
int64_t checked_mul(int64_t a, int64_t b);

// A word x_{i_1}...x_{i_k} in the non-commuting variables; variables are
// generator ids. Ordered by length, then lexicographically.
struct Monomial {
	std::vector<uint32_t> vars;

	size_t degree() const { return vars.size(); }
	bool operator==(const Monomial &) const = default;

	std::strong_ordering operator<=>(const Monomial &o) const {
		if (vars.size() != o.vars.size())
			return vars.size() <=> o.vars.size();
		return vars <=> o.vars;
	}
};

// Which monomials survive. keep() is monotone under subwords: the constraints
// are per-variable caps, a budget of variables allowed at multiplicity >= 2,
// and a global degree cap.
struct RepeatPolicy {
	std::optional<int> default_cap = 1;
	std::unordered_map<uint32_t, std::optional<int>> exceptions;
	std::optional<int> doubled_budget;
	std::optional<int> global_degree_cap;

	static RepeatPolicy no_repeat() { return RepeatPolicy{}; }
	static RepeatPolicy plus() {
		RepeatPolicy p;
		p.default_cap = 2;
		p.doubled_budget = 1;
		return p;
	}
	static RepeatPolicy with_caps(int cap) {
		RepeatPolicy p;
		p.default_cap = cap;
		return p;
	}

	std::optional<int> cap(uint32_t var) const {
		auto it = exceptions.find(var);
		return it != exceptions.end() ? it->second : default_cap;
	}

	bool keep(const Monomial &m) const;

	// A finite degree bound valid for any monomial over `vars` that keep()
	// accepts, or nullopt when the policy does not bound degree over them.
	std::optional<int> degree_bound(const std::vector<uint32_t> &vars) const;
};

// Sparse series with exact integer coefficients. Terms are kept sorted in the
// (length, lex) monomial order with no zero coefficients, so equality is
// representation equality and dumps are deterministic.
class Series {
  public:
	struct Term {
		Monomial mono;
		int64_t coeff;
		bool operator==(const Term &) const = default;
	};

	Series() = default;
	static Series one();
	static Series constant(int64_t c);

	const std::vector<Term> &terms() const { return terms_; }
	size_t size() const { return terms_.size(); }
	bool operator==(const Series &) const = default;

	int64_t coefficient(const Monomial &m) const;
	bool is_one() const;
	bool is_zero() const { return terms_.empty(); }

	// One line per term: "<signed coeff> <space-separated indices>".
	std::string dump() const;

	// Builds from unsorted (possibly duplicated) terms.
	static Series from_terms(std::vector<Term> terms);

  private:
	std::vector<Term> terms_;
};

Series series_add(const Series &a, const Series &b);
Series series_sub(const Series &a, const Series &b);
Series series_neg(const Series &a);
Series series_mul(const Series &a, const Series &b, const RepeatPolicy &p);
// Inverse of a series with constant term +1/-1 (policy-nilpotent tail).
Series series_inverse(const Series &a, const RepeatPolicy &p);
// Applies the policy filter to an existing series.
Series series_filter(const Series &a, const RepeatPolicy &p);

// M(g) = 1 + x_g; M(g^-1) = 1 - x_g + x_g^2 - ..., truncated by the policy.
// Throws std::invalid_argument when the policy does not bound the degree in
// x_g.
Series expand_generator(Generator g, int sign, const RepeatPolicy &p);
Series expand_word(const Word &w, const RepeatPolicy &p);
Series expand_expr(const CommExpr &e, const RepeatPolicy &p);

// Coefficient of m in the full, unfiltered Magnus expansion of w, computed by
// a positional dynamic program without materializing the series.
int64_t coefficient(const Word &w, const Monomial &m);

bool is_one(const Series &s);

} // namespace linkhom
