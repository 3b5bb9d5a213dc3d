#include "linkhom/magnus.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>
#include <sstream>
#include <stdexcept>

namespace linkhom {

int64_t checked_add(int64_t a, int64_t b) {
	int64_t r;
	if (__builtin_add_overflow(a, b, &r))
		throw OverflowError();
	return r;
}

int64_t checked_mul(int64_t a, int64_t b) {
	int64_t r;
	if (__builtin_mul_overflow(a, b, &r))
		throw OverflowError();
	return r;
}

namespace {

// (variable, multiplicity) pairs sorted by variable.
using Profile = std::vector<std::pair<uint32_t, int>>;

Profile profile_of(const Monomial &m) {
	Profile p;
	for (uint32_t v : m.vars) {
		auto it = std::lower_bound(
		    p.begin(), p.end(), v,
		    [](const auto &e, uint32_t x) { return e.first < x; });
		if (it != p.end() && it->first == v)
			it->second++;
		else
			p.insert(it, {v, 1});
	}
	return p;
}

Profile merge_profiles(const Profile &a, const Profile &b) {
	Profile out;
	out.reserve(a.size() + b.size());
	size_t i = 0, j = 0;
	while (i < a.size() && j < b.size()) {
		if (a[i].first < b[j].first)
			out.push_back(a[i++]);
		else if (b[j].first < a[i].first)
			out.push_back(b[j++]);
		else {
			out.push_back({a[i].first, a[i].second + b[j].second});
			++i, ++j;
		}
	}
	for (; i < a.size(); ++i)
		out.push_back(a[i]);
	for (; j < b.size(); ++j)
		out.push_back(b[j]);
	return out;
}

bool keep_profile(const RepeatPolicy &p, const Profile &prof, size_t degree) {
	if (p.global_degree_cap && static_cast<int>(degree) > *p.global_degree_cap)
		return false;
	int doubled = 0;
	for (const auto &[var, count] : prof) {
		auto cap = p.cap(var);
		if (cap && count > *cap)
			return false;
		if (count >= 2)
			++doubled;
	}
	if (p.doubled_budget && doubled > *p.doubled_budget)
		return false;
	return true;
}

} // namespace

bool RepeatPolicy::keep(const Monomial &m) const {
	return keep_profile(*this, profile_of(m), m.degree());
}

std::optional<int> RepeatPolicy::degree_bound(
    const std::vector<uint32_t> &vars) const {
	if (global_degree_cap)
		return global_degree_cap;
	long long sum = 0;
	for (uint32_t v : vars) {
		auto c = cap(v);
		if (!c)
			return std::nullopt;
		sum += *c;
	}
	if (sum > 1'000'000)
		return std::nullopt;
	return static_cast<int>(sum);
}

Series Series::one() { return constant(1); }

Series Series::constant(int64_t c) {
	Series s;
	if (c != 0)
		s.terms_.push_back({Monomial{}, c});
	return s;
}

int64_t Series::coefficient(const Monomial &m) const {
	auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
	                           [](const Term &t, const Monomial &x) {
		                           return t.mono < x;
	                           });
	if (it != terms_.end() && it->mono == m)
		return it->coeff;
	return 0;
}

bool Series::is_one() const {
	return terms_.size() == 1 && terms_[0].mono.vars.empty() &&
	       terms_[0].coeff == 1;
}

std::string Series::dump() const {
	std::ostringstream os;
	for (const Term &t : terms_) {
		os << t.coeff;
		for (uint32_t v : t.mono.vars)
			os << ' ' << v;
		os << '\n';
	}
	return os.str();
}

Series Series::from_terms(std::vector<Term> terms) {
	std::sort(terms.begin(), terms.end(),
	          [](const Term &a, const Term &b) { return a.mono < b.mono; });
	Series out;
	out.terms_.reserve(terms.size());
	for (Term &t : terms) {
		if (!out.terms_.empty() && out.terms_.back().mono == t.mono)
			out.terms_.back().coeff =
			    checked_add(out.terms_.back().coeff, t.coeff);
		else
			out.terms_.push_back(std::move(t));
		if (out.terms_.back().coeff == 0)
			out.terms_.pop_back();
	}
	return out;
}

Series series_add(const Series &a, const Series &b) {
	std::vector<Series::Term> terms = a.terms();
	terms.insert(terms.end(), b.terms().begin(), b.terms().end());
	return Series::from_terms(std::move(terms));
}

Series series_neg(const Series &a) {
	std::vector<Series::Term> terms = a.terms();
	for (auto &t : terms)
		t.coeff = checked_mul(t.coeff, -1);
	return Series::from_terms(std::move(terms));
}

Series series_sub(const Series &a, const Series &b) {
	return series_add(a, series_neg(b));
}

namespace {

// When every variable in sight is capped at one (and there are at most 64 of
// them), a cross term survives exactly when the two variable sets are
// disjoint, so the whole keep test collapses to one mask comparison.
Series series_mul_all_one(const Series &a, const Series &b,
                          const std::map<uint32_t, int> &bit_of,
                          std::optional<int> deg_cap) {
	auto masks_of = [&](const Series &s) {
		std::vector<uint64_t> m(s.size());
		for (size_t i = 0; i < s.size(); ++i)
			for (uint32_t v : s.terms()[i].mono.vars)
				m[i] |= uint64_t{1} << bit_of.at(v);
		return m;
	};
	std::vector<uint64_t> mas = masks_of(a), mbs = masks_of(b);
	std::unordered_map<uint64_t, std::vector<size_t>> buckets_b;
	for (size_t j = 0; j < b.size(); ++j)
		buckets_b[mbs[j]].push_back(j);

	std::vector<Series::Term> out;
	for (size_t i = 0; i < a.size(); ++i) {
		const auto &ta = a.terms()[i];
		for (const auto &[mb, jb] : buckets_b) {
			if (mas[i] & mb)
				continue;
			for (size_t j : jb) {
				const auto &tb = b.terms()[j];
				size_t deg = ta.mono.degree() + tb.mono.degree();
				if (deg_cap && static_cast<int>(deg) > *deg_cap)
					continue;
				Monomial m;
				m.vars.reserve(deg);
				m.vars = ta.mono.vars;
				m.vars.insert(m.vars.end(), tb.mono.vars.begin(),
				              tb.mono.vars.end());
				out.push_back(
				    {std::move(m), checked_mul(ta.coeff, tb.coeff)});
			}
		}
	}
	return Series::from_terms(std::move(out));
}

} // namespace

Series series_mul(const Series &a, const Series &b, const RepeatPolicy &p) {
	if (a.is_zero() || b.is_zero())
		return Series();

	{
		std::set<uint32_t> vars;
		for (const auto &t : a.terms())
			for (uint32_t v : t.mono.vars)
				vars.insert(v);
		for (const auto &t : b.terms())
			for (uint32_t v : t.mono.vars)
				vars.insert(v);
		bool all_one = vars.size() <= 64;
		if (all_one)
			for (uint32_t v : vars) {
				auto cap = p.cap(v);
				if (!cap || *cap != 1) {
					all_one = false;
					break;
				}
			}
		if (all_one) {
			std::map<uint32_t, int> bit_of;
			int next = 0;
			for (uint32_t v : vars)
				bit_of[v] = next++;
			return series_mul_all_one(a, b, bit_of, p.global_degree_cap);
		}
	}

	// Cached profiles; cheap conservative prunes before the exact keep test.
	std::vector<Profile> pa(a.size()), pb(b.size());
	for (size_t i = 0; i < a.size(); ++i)
		pa[i] = profile_of(a.terms()[i].mono);
	for (size_t j = 0; j < b.size(); ++j)
		pb[j] = profile_of(b.terms()[j].mono);

	std::vector<int> doubled_a(a.size()), doubled_b(b.size());
	for (size_t i = 0; i < a.size(); ++i)
		for (const auto &e : pa[i])
			doubled_a[i] += e.second >= 2;
	for (size_t j = 0; j < b.size(); ++j)
		for (const auto &e : pb[j])
			doubled_b[j] += e.second >= 2;

	// The doubled-count prune is only sound when no cap admits multiplicity
	// four, since then two separately doubled occurrences of one variable are
	// killed either way.
	bool budget_prune = false;
	if (p.doubled_budget && p.default_cap && *p.default_cap <= 3) {
		budget_prune = true;
		for (const auto &[var, cap] : p.exceptions)
			if (!cap || *cap > 3)
				budget_prune = false;
	}

	std::optional<int> deg_cap = p.global_degree_cap;

	// Variables capped at one cannot appear on both sides of a surviving
	// product; bucket terms by a bitmask over (up to 64 of) them so colliding
	// buckets are skipped wholesale. Crucial for large NoRepeat series, where
	// almost every cross term dies on a shared variable.
	std::map<uint32_t, int> bit_of;
	{
		std::set<uint32_t> vars;
		for (const auto &t : a.terms())
			for (uint32_t v : t.mono.vars)
				vars.insert(v);
		for (const auto &t : b.terms())
			for (uint32_t v : t.mono.vars)
				vars.insert(v);
		int next = 0;
		for (uint32_t v : vars) {
			auto cap = p.cap(v);
			if (cap && *cap == 1 && next < 64)
				bit_of[v] = next++;
		}
	}
	auto mask_of = [&](const Profile &prof) {
		uint64_t m = 0;
		for (const auto &[var, count] : prof) {
			auto it = bit_of.find(var);
			if (it != bit_of.end())
				m |= uint64_t{1} << it->second;
		}
		return m;
	};
	std::unordered_map<uint64_t, std::vector<size_t>> buckets_a, buckets_b;
	for (size_t i = 0; i < a.size(); ++i)
		buckets_a[mask_of(pa[i])].push_back(i);
	for (size_t j = 0; j < b.size(); ++j)
		buckets_b[mask_of(pb[j])].push_back(j);

	std::vector<Series::Term> out;
	for (const auto &[ma, ia] : buckets_a) {
		for (const auto &[mb, jb] : buckets_b) {
			if (ma & mb)
				continue;
			for (size_t i : ia) {
				const auto &ta = a.terms()[i];
				for (size_t j : jb) {
					const auto &tb = b.terms()[j];
					size_t deg = ta.mono.degree() + tb.mono.degree();
					if (deg_cap && static_cast<int>(deg) > *deg_cap)
						continue;
					if (budget_prune &&
					    doubled_a[i] + doubled_b[j] > *p.doubled_budget)
						continue;
					Profile merged = merge_profiles(pa[i], pb[j]);
					if (!keep_profile(p, merged, deg))
						continue;
					Monomial m;
					m.vars.reserve(deg);
					m.vars = ta.mono.vars;
					m.vars.insert(m.vars.end(), tb.mono.vars.begin(),
					              tb.mono.vars.end());
					out.push_back(
					    {std::move(m), checked_mul(ta.coeff, tb.coeff)});
				}
			}
		}
	}
	return Series::from_terms(std::move(out));
}

Series series_filter(const Series &a, const RepeatPolicy &p) {
	std::vector<Series::Term> out;
	for (const auto &t : a.terms())
		if (p.keep(t.mono))
			out.push_back(t);
	return Series::from_terms(std::move(out));
}

Series series_inverse(const Series &a, const RepeatPolicy &p) {
	if (a.is_zero() || !a.terms()[0].mono.vars.empty())
		throw std::invalid_argument("series has no unit constant term");
	int64_t c = a.terms()[0].coeff;
	if (c != 1 && c != -1)
		throw std::invalid_argument("constant term is not a unit");

	// a = c(1 + n), inverse = c(1 - n + n^2 - ...); n is policy-nilpotent.
	Series n = series_sub(c == 1 ? a : series_neg(a), Series::one());

	std::set<uint32_t> var_set;
	for (const auto &t : n.terms())
		for (uint32_t v : t.mono.vars)
			var_set.insert(v);
	auto bound =
	    p.degree_bound(std::vector<uint32_t>(var_set.begin(), var_set.end()));
	if (!bound)
		throw std::invalid_argument(
		    "policy does not bound degree; cannot invert");

	Series acc = Series::one();
	Series pow = Series::one();
	for (int k = 1; k <= *bound + 1; ++k) {
		pow = series_mul(pow, series_neg(n), p);
		if (pow.is_zero())
			break;
		acc = series_add(acc, pow);
	}
	if (c == -1)
		acc = series_neg(acc);
	return acc;
}

Series expand_generator(Generator g, int sign, const RepeatPolicy &p) {
	auto cap = p.cap(g.id);
	if (!cap && !p.global_degree_cap)
		throw std::invalid_argument(
		    "policy does not bound degree in variable " + g.display());
	int max_pow = 1;
	if (sign < 0) {
		max_pow = cap ? *cap : *p.global_degree_cap;
		if (p.global_degree_cap && *p.global_degree_cap < max_pow)
			max_pow = *p.global_degree_cap;
	}
	std::vector<Series::Term> terms;
	terms.push_back({Monomial{}, 1});
	int64_t coeff = sign >= 0 ? 1 : -1;
	for (int k = 1; k <= max_pow; ++k) {
		Monomial m;
		m.vars.assign(k, g.id);
		if (p.keep(m))
			terms.push_back({std::move(m), coeff});
		if (sign < 0)
			coeff = -coeff;
	}
	return Series::from_terms(std::move(terms));
}

namespace {

Series expand_range(std::span<const Letter> letters, const RepeatPolicy &p) {
	if (letters.empty())
		return Series::one();
	if (letters.size() == 1)
		return expand_generator(Generator{letters[0].gen}, letters[0].sign, p);
	size_t mid = letters.size() / 2;
	return series_mul(expand_range(letters.subspan(0, mid), p),
	                  expand_range(letters.subspan(mid), p), p);
}

} // namespace

Series expand_word(const Word &w, const RepeatPolicy &p) {
	return expand_range(w.letters(), p);
}

Series expand_expr(const CommExpr &e, const RepeatPolicy &p) {
	switch (e.kind()) {
	case CommExpr::Kind::Gen:
		return expand_generator(e.gen_value(), 1, p);
	case CommExpr::Kind::Prod: {
		// Balanced fold: long factor chains telescope, and pairing neighbours
		// keeps the intermediate series far smaller than a left fold does.
		const auto &kids = e.children();
		std::function<Series(size_t, size_t)> fold = [&](size_t lo,
		                                                 size_t hi) -> Series {
			if (lo == hi)
				return Series::one();
			if (hi - lo == 1)
				return expand_expr(kids[lo], p);
			size_t mid = lo + (hi - lo) / 2;
			return series_mul(fold(lo, mid), fold(mid, hi), p);
		};
		return fold(0, kids.size());
	}
	case CommExpr::Kind::Inv:
		return series_inverse(expand_expr(e.children()[0], p), p);
	case CommExpr::Kind::Conj: {
		Series base = expand_expr(e.children()[0], p);
		Series by = expand_expr(e.children()[1], p);
		return series_mul(series_mul(series_inverse(by, p), base, p), by, p);
	}
	case CommExpr::Kind::Brack: {
		// M([A,B]) = 1 + A^-1 B^-1 (AB - BA)
		Series sa = expand_expr(e.children()[0], p);
		Series sb = expand_expr(e.children()[1], p);
		Series d = series_sub(series_mul(sa, sb, p), series_mul(sb, sa, p));
		if (d.is_zero())
			return Series::one();
		Series pre = series_mul(series_inverse(sa, p), series_inverse(sb, p), p);
		return series_add(Series::one(), series_mul(pre, d, p));
	}
	}
	throw std::logic_error("bad CommExpr kind");
}

int64_t coefficient(const Word &w, const Monomial &m) {
	size_t k = m.degree();
	std::vector<int64_t> dp(k + 1, 0);
	dp[0] = 1;
	for (const Letter &l : w.letters()) {
		std::vector<int64_t> next(k + 1, 0);
		if (l.sign > 0) {
			for (size_t p = 0; p <= k; ++p) {
				if (dp[p] == 0)
					continue;
				next[p] = checked_add(next[p], dp[p]);
				if (p < k && m.vars[p] == l.gen)
					next[p + 1] = checked_add(next[p + 1], dp[p]);
			}
		} else {
			// M(g^-1) contributes (-1)^j x_g^j for every j >= 0.
			for (size_t p = 0; p <= k; ++p) {
				int64_t sign = 1;
				for (size_t j = 0; p + j <= k; ++j) {
					if (dp[p] != 0)
						next[p + j] =
						    checked_add(next[p + j], checked_mul(sign, dp[p]));
					if (p + j < k && m.vars[p + j] == l.gen)
						sign = -sign;
					else
						break;
				}
			}
		}
		dp = std::move(next);
	}
	return dp[k];
}

bool is_one(const Series &s) { return s.is_one(); }

} // namespace linkhom
