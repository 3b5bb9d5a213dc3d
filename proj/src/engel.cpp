#include "linkhom/engel.hpp"

#include <algorithm>
#include <climits>
#include <cstdlib>
#include <stdexcept>

namespace linkhom {

// --- almost basic commutators -----------------------------------------------

bool AlmostBasic::well_formed() const {
	if (p >= q || q >= static_cast<size_t>(length()))
		return false;
	// adjacent doubled slots at the front read [h,h,...] = 1
	if (p == 0 && q == 1)
		return false;
	if (a == b)
		return false;
	for (size_t i = 0; i < rest.size(); ++i)
		for (size_t j = i + 1; j < rest.size(); ++j)
			if (rest[i] == rest[j])
				return false;
	return true;
}

std::vector<Word> AlmostBasic::entries() const {
	if (!well_formed())
		throw std::invalid_argument("malformed almost basic commutator");
	Word doubled = mul(Word(a), Word(b));
	std::vector<Word> out(length());
	size_t r = 0;
	for (size_t i = 0; i < out.size(); ++i)
		out[i] = (i == p || i == q) ? doubled : Word(rest[r++]);
	return out;
}

CommExpr almost_basic_expr(const AlmostBasic &ab) {
	std::vector<CommExpr> es;
	for (const Word &e : ab.entries())
		es.push_back(word_expr(e));
	return CommExpr::left_normed(std::move(es));
}

Word almost_basic_expand(const AlmostBasic &ab) {
	return almost_basic_expr(ab).expand();
}

std::vector<AlmostBasic> almost_basic_basis(const std::vector<Generator> &ctx,
                                            BasisKind kind) {
	size_t n = ctx.size();
	std::vector<AlmostBasic> out;
	if (n < 3)
		return out;
	for (size_t p = (kind == BasisKind::FirstEntryGenerator ? 1 : 0); p < n;
	     ++p) {
		for (size_t q = (p == 0 ? 2 : p + 1); q < n; ++q) {
			for (size_t ia = 0; ia < n; ++ia) {
				for (size_t ib = ia + 1; ib < n; ++ib) {
					std::vector<Generator> rest;
					for (size_t r = 0; r < n; ++r)
						if (r != ia && r != ib)
							rest.push_back(ctx[r]);
					std::sort(rest.begin(), rest.end());
					do {
						AlmostBasic ab;
						ab.p = p;
						ab.q = q;
						ab.a = ctx[ia];
						ab.b = ctx[ib];
						ab.rest = rest;
						out.push_back(ab);
					} while (std::next_permutation(rest.begin(), rest.end()));
				}
			}
		}
	}
	return out;
}

// --- decomposition ----------------------------------------------------------

Word Decomposition::value() const {
	Word out;
	for (const DecompositionTerm &t : terms) {
		Word f = conj(almost_basic_expand(t.basic), t.conjugator);
		if (t.exponent < 0)
			f = inv(f);
		for (int64_t i = 0; i < std::llabs(t.exponent); ++i)
			out = mul(out, f);
	}
	return out;
}

CommExpr Decomposition::value_expr() const {
	std::vector<CommExpr> fs;
	for (const DecompositionTerm &t : terms) {
		CommExpr f = almost_basic_expr(t.basic);
		if (!t.conjugator.empty())
			f = CommExpr::conjugate(f, word_expr(t.conjugator));
		if (t.exponent < 0)
			f = CommExpr::inverse(f);
		for (int64_t i = 0; i < std::llabs(t.exponent); ++i)
			fs.push_back(f);
	}
	return CommExpr::prod(std::move(fs));
}

Series top_degree_series(const Word &w, const std::vector<Generator> &ctx) {
	Series s = expand_word(w, RepeatPolicy::no_repeat());
	std::vector<Series::Term> keep;
	for (const auto &t : s.terms())
		if (t.mono.degree() == ctx.size())
			keep.push_back(t);
	return Series::from_terms(std::move(keep));
}

namespace {

// All length-n non-repeating monomials over ctx, in permutation order.
std::vector<Monomial> top_monomials(const std::vector<Generator> &ctx) {
	std::vector<uint32_t> ids;
	for (Generator g : ctx)
		ids.push_back(g.id);
	std::sort(ids.begin(), ids.end());
	std::vector<Monomial> out;
	do {
		out.push_back(Monomial{ids});
	} while (std::next_permutation(ids.begin(), ids.end()));
	return out;
}

std::vector<int64_t> coeff_vector(const Word &w,
                                  const std::vector<Monomial> &rows) {
	std::vector<int64_t> v;
	v.reserve(rows.size());
	for (const Monomial &m : rows)
		v.push_back(coefficient(w, m));
	return v;
}

// Solves A x = t over the integers by unimodular column reduction; A is
// row-major m x c. nullopt when no integer solution exists.
std::optional<std::vector<int64_t>>
solve_integer(std::vector<std::vector<int64_t>> A, std::vector<int64_t> t) {
	size_t m = A.size();
	size_t c = m ? A[0].size() : 0;
	std::vector<std::vector<int64_t>> U(c, std::vector<int64_t>(c, 0));
	for (size_t j = 0; j < c; ++j)
		U[j][j] = 1;
	auto col_sub = [&](size_t dst, size_t src, int64_t q) {
		if (q == 0)
			return;
		for (size_t r = 0; r < m; ++r)
			A[r][dst] = checked_add(A[r][dst], -checked_mul(q, A[r][src]));
		for (size_t r = 0; r < c; ++r)
			U[r][dst] = checked_add(U[r][dst], -checked_mul(q, U[r][src]));
	};
	auto col_swap = [&](size_t x, size_t y) {
		if (x == y)
			return;
		for (size_t r = 0; r < m; ++r)
			std::swap(A[r][x], A[r][y]);
		for (size_t r = 0; r < c; ++r)
			std::swap(U[r][x], U[r][y]);
	};

	std::vector<std::pair<size_t, size_t>> pivots; // (row, col)
	size_t pc = 0;
	for (size_t r = 0; r < m && pc < c; ++r) {
		for (;;) {
			size_t best = c;
			int nonzero = 0;
			for (size_t j = pc; j < c; ++j) {
				if (A[r][j] == 0)
					continue;
				++nonzero;
				if (best == c ||
				    std::llabs(A[r][j]) < std::llabs(A[r][best]))
					best = j;
			}
			if (nonzero == 0)
				break;
			if (nonzero == 1) {
				col_swap(pc, best);
				pivots.emplace_back(r, pc);
				++pc;
				break;
			}
			for (size_t j = pc; j < c; ++j)
				if (j != best && A[r][j] != 0)
					col_sub(j, best, A[r][j] / A[r][best]);
		}
	}

	std::vector<int64_t> y(c, 0);
	size_t next_pivot = 0;
	for (size_t r = 0; r < m; ++r) {
		int64_t acc = 0;
		for (size_t j = 0; j < c; ++j)
			acc = checked_add(acc, checked_mul(A[r][j], y[j]));
		int64_t need = checked_add(t[r], -acc);
		if (next_pivot < pivots.size() && pivots[next_pivot].first == r) {
			size_t j = pivots[next_pivot].second;
			if (need % A[r][j] != 0)
				return std::nullopt;
			y[j] = need / A[r][j];
			++next_pivot;
		} else if (need != 0) {
			return std::nullopt;
		}
	}
	std::vector<int64_t> x(c, 0);
	for (size_t r = 0; r < c; ++r) {
		int64_t acc = 0;
		for (size_t j = 0; j < c; ++j)
			acc = checked_add(acc, checked_mul(U[r][j], y[j]));
		x[r] = acc;
	}
	return x;
}

} // namespace

Decomposition decompose_top_degree(const Word &target,
                                   const std::vector<Generator> &ctx,
                                   BasisKind kind) {
	size_t n = ctx.size();
	Decomposition out;
	if (target.empty()) {
		out.ok = true;
		return out;
	}
	if (lcs_degree(target, static_cast<int>(n) - 1).has_value())
		throw std::invalid_argument(
		    "target sits below the top lower-central term");

	std::vector<Monomial> rows = top_monomials(ctx);
	std::vector<int64_t> t;
	t.reserve(rows.size());
	for (const Monomial &m : rows)
		t.push_back(coefficient(target, m));

	std::vector<AlmostBasic> basis = almost_basic_basis(ctx, kind);
	std::vector<std::vector<int64_t>> cols;
	cols.reserve(basis.size());
	for (const AlmostBasic &ab : basis)
		cols.push_back(coeff_vector(almost_basic_expand(ab), rows));

	// exact single-element match first
	for (size_t j = 0; j < basis.size(); ++j) {
		if (cols[j] == t) {
			out.terms.push_back(DecompositionTerm{basis[j], Word{}, 1});
			out.ok = true;
			return out;
		}
	}

	std::vector<std::vector<int64_t>> A(rows.size(),
	                                    std::vector<int64_t>(basis.size()));
	for (size_t r = 0; r < rows.size(); ++r)
		for (size_t j = 0; j < basis.size(); ++j)
			A[r][j] = cols[j][r];

	auto x = solve_integer(A, t);
	if (!x) {
		std::vector<Series::Term> res;
		for (size_t r = 0; r < rows.size(); ++r)
			if (t[r] != 0)
				res.push_back(Series::Term{rows[r], t[r]});
		out.residual = Series::from_terms(std::move(res));
		out.ok = false;
		return out;
	}
	for (size_t j = 0; j < basis.size(); ++j)
		if ((*x)[j] != 0)
			out.terms.push_back(DecompositionTerm{basis[j], Word{}, (*x)[j]});
	// guard: re-expansion must reproduce the target vector exactly
	for (size_t r = 0; r < rows.size(); ++r) {
		int64_t acc = 0;
		for (size_t j = 0; j < basis.size(); ++j)
			acc = checked_add(acc, checked_mul(A[r][j], (*x)[j]));
		if (acc != t[r])
			throw std::logic_error("decomposition re-expansion mismatch");
	}
	out.ok = true;
	return out;
}

// --- exact bracket splitting ------------------------------------------------

Word BracketAtom::value() const {
	Word v = conj(core, conjugator);
	return sign < 0 ? inv(v) : v;
}

namespace {

// Normalizes [l^sl, r^sr]^c to a bracket with positive slots using
// [x^-1,y] = [y,x]^{x^-1} and [x,y^-1] = [y,x]^{y^-1}.
BracketFactor positive_bracket(const BracketAtom &la, const BracketAtom &ra,
                               Word c) {
	Word l = conj(la.core, la.conjugator);
	Word r = conj(ra.core, ra.conjugator);
	bool swapped = false;
	if (la.sign < 0 && ra.sign < 0) {
		c = mul(mul(inv(r), inv(l)), c); // [x^-1,y^-1] = [x,y]^{y^-1 x^-1}
	} else if (la.sign < 0) {
		c = mul(inv(l), c);
		std::swap(l, r);
		swapped = true;
	} else if (ra.sign < 0) {
		c = mul(inv(r), c);
		std::swap(l, r);
		swapped = true;
	}
	BracketFactor f;
	f.left = l;
	f.right = r;
	f.conjugator = c;
	const BracketAtom &ls = swapped ? ra : la;
	const BracketAtom &rs = swapped ? la : ra;
	f.left_core = ls.core;
	f.right_core = rs.core;
	f.left_conj = ls.conjugator;
	f.right_conj = rs.conjugator;
	f.left_basic = ls.basic;
	f.right_basic = rs.basic;
	return f;
}

BracketFactor::Shape shape_of(const BracketAtom &la, const BracketAtom &ra) {
	if (la.basic && ra.basic)
		return BracketFactor::Shape::CC;
	if (la.basic)
		return BracketFactor::Shape::CBeta;
	if (ra.basic)
		return BracketFactor::Shape::AlphaC;
	return BracketFactor::Shape::Plain;
}

std::vector<BracketAtom> flatten(const Decomposition &dec, bool invert) {
	std::vector<BracketAtom> out;
	for (const DecompositionTerm &t : dec.terms) {
		BracketAtom a;
		a.core = almost_basic_expand(t.basic);
		a.conjugator = t.conjugator;
		a.sign = t.exponent < 0 ? -1 : 1;
		a.basic = t.basic;
		for (int64_t i = 0; i < std::llabs(t.exponent); ++i)
			out.push_back(a);
	}
	if (invert) {
		std::reverse(out.begin(), out.end());
		for (BracketAtom &a : out)
			a.sign = -a.sign;
	}
	return out;
}

} // namespace

std::vector<BracketFactor>
split_bracket_product(const std::vector<BracketAtom> &left,
                      const std::vector<BracketAtom> &right) {
	size_t m = left.size(), n = right.size();
	std::vector<BracketFactor> out;
	if (m == 0 || n == 0)
		return out;
	// suffix products of slot values
	std::vector<Word> ls(m + 1), rs(n + 1);
	for (size_t i = m; i-- > 0;)
		ls[i] = mul(left[i].value(), ls[i + 1]);
	for (size_t j = n; j-- > 0;)
		rs[j] = mul(right[j].value(), rs[j + 1]);
	// [u_i, v_j]^{(v_{j+1}..v_n)(u_{i+1}..u_m)}, i ascending, j descending
	for (size_t i = 0; i < m; ++i) {
		for (size_t j = n; j-- > 0;) {
			Word c = mul(rs[j + 1], ls[i + 1]);
			BracketFactor f = positive_bracket(left[i], right[j], c);
			f.shape = shape_of(left[i], right[j]);
			out.push_back(f);
		}
	}
	return out;
}

// --- the W construction -----------------------------------------------------

bool WCertificate::replay() const {
	Word e = brack(mul(alpha, inv(alpha_prime)), mul(inv(beta_prime), beta));
	Word f2 = conj(brack(alpha, inv(beta_prime)), gamma2);
	Word f3 = brack(inv(alpha_prime), beta);
	Word f4 = conj(brack(inv(alpha_prime), inv(beta_prime)), gamma3);
	Word tail = mul(f2, mul(f3, f4));
	if (e != mul(conj(brack(alpha, beta), gamma1), tail))
		return false;
	if (w != conj(inv(tail), inv(gamma1)))
		return false;
	Word prod;
	for (const BracketFactor &f : factors)
		prod = mul(prod, f.value());
	if (prod != w)
		return false;
	return w_expr.expand() == w && lhs_expr.expand() == brack(alpha, beta);
}

Lemma51Result lemma51_W(const CommExpr &alpha, const CommExpr &beta,
                        const Decomposition &alpha_dec,
                        const Decomposition &beta_dec, int k) {
	if (!alpha_dec.ok || !beta_dec.ok)
		throw std::invalid_argument("decomposition did not succeed");
	CommExpr eap = alpha_dec.value_expr();
	CommExpr ebp = beta_dec.value_expr();
	for (const CommExpr *e :
	     std::initializer_list<const CommExpr *>{&alpha, &beta, &eap, &ebp})
		if (k > 1 && lcs_degree(*e, k - 1).has_value())
			throw std::invalid_argument(
			    "input below the k-th lower central term");
	RepeatPolicy nr = RepeatPolicy::no_repeat();
	if (expand_expr(alpha, nr) != expand_expr(eap, nr) ||
	    expand_expr(beta, nr) != expand_expr(ebp, nr))
		throw std::invalid_argument(
		    "decomposition differs from input in the Milnor group");

	Word a = alpha.expand();
	Word b = beta.expand();
	Word ap = alpha_dec.value();
	Word bp = beta_dec.value();

	WCertificate cert;
	cert.alpha = a;
	cert.beta = b;
	cert.alpha_prime = ap;
	cert.beta_prime = bp;
	cert.gamma1 = inv(ap);
	cert.gamma2 = mul(b, cert.gamma1);
	cert.gamma3 = b;

	Word f2 = conj(brack(a, inv(bp)), cert.gamma2);
	Word f3 = brack(inv(ap), b);
	Word f4 = conj(brack(inv(ap), inv(bp)), cert.gamma3);
	cert.w = conj(inv(mul(f2, mul(f3, f4))), inv(cert.gamma1));

	// W = (f4^-1 f3^-1 f2^-1)^{gamma1^-1}, each piece split into conjugated
	// brackets of the decomposition constituents.
	std::vector<BracketAtom> ap_inv = flatten(alpha_dec, true);
	std::vector<BracketAtom> bp_inv = flatten(beta_dec, true);
	BracketAtom aa{a, Word{}, 1, std::nullopt};
	BracketAtom ba{b, Word{}, 1, std::nullopt};
	Word g1i = inv(cert.gamma1);
	auto append = [&](std::vector<BracketFactor> fs, const Word &outer) {
		Word post = mul(outer, g1i);
		for (BracketFactor &f : fs) {
			f.conjugator = mul(f.conjugator, post);
			cert.factors.push_back(std::move(f));
		}
	};
	// f4^-1 = [bp^-1, ap^-1]^{gamma3}
	append(split_bracket_product(bp_inv, ap_inv), cert.gamma3);
	// f3^-1 = [b, ap^-1]
	append(split_bracket_product({ba}, ap_inv), Word{});
	// f2^-1 = [bp^-1, a]^{gamma2}
	append(split_bracket_product(bp_inv, {aa}), cert.gamma2);

	CommExpr f2e = CommExpr::conjugate(
	    CommExpr::bracket(alpha, CommExpr::inverse(ebp)),
	    CommExpr::prod({beta, CommExpr::inverse(eap)}));
	CommExpr f3e = CommExpr::bracket(CommExpr::inverse(eap), beta);
	CommExpr f4e = CommExpr::conjugate(
	    CommExpr::bracket(CommExpr::inverse(eap), CommExpr::inverse(ebp)),
	    beta);
	cert.w_expr = CommExpr::conjugate(
	    CommExpr::inverse(CommExpr::prod({f2e, f3e, f4e})), eap);
	cert.lhs_expr = CommExpr::bracket(alpha, beta);

	return Lemma51Result{cert.w, std::move(cert)};
}

Lemma52Result lemma52(const CommExpr &a1, const CommExpr &b1,
                      const Decomposition &a1_dec, const Decomposition &b1_dec,
                      const CommExpr &a2, const CommExpr &b2,
                      const Decomposition &a2_dec, const Decomposition &b2_dec,
                      int k) {
	Lemma52Result out{lemma51_W(a1, b1, a1_dec, b1_dec, k),
	                  lemma51_W(a2, b2, a2_dec, b2_dec, k)};
	return out;
}

int lcs_lower_bound(const CommExpr &e) {
	constexpr int kTop = INT_MAX / 2;
	switch (e.kind()) {
	case CommExpr::Kind::Gen:
		return 1;
	case CommExpr::Kind::Prod: {
		int b = kTop;
		for (const CommExpr &c : e.children())
			b = std::min(b, lcs_lower_bound(c));
		return b;
	}
	case CommExpr::Kind::Inv:
		return lcs_lower_bound(e.children()[0]);
	case CommExpr::Kind::Conj:
		return lcs_lower_bound(e.children()[0]);
	case CommExpr::Kind::Brack: {
		int l = lcs_lower_bound(e.children()[0]);
		int r = lcs_lower_bound(e.children()[1]);
		return std::min(kTop, l + r);
	}
	}
	return 1;
}

// --- elementary links -------------------------------------------------------

LinkPresentation elementary_link(ElementaryVariant v, ElementaryFlavor f) {
	GbrNode chain = GbrNode::bing(
	    GbrNode::bing(GbrNode::bing(GbrNode::leaf(), GbrNode::leaf()),
	                  GbrNode::leaf()),
	    GbrNode::leaf());
	bool pre = f == ElementaryFlavor::Prepended;
	GbrSpec spec;
	spec.second = pre ? GbrNode::bing(GbrNode::leaf(), chain) : chain;
	LinkPresentation l = gbr(spec);

	size_t base = pre ? 2 : 1;
	size_t i1 = base + (v == ElementaryVariant::A ? 1 : 0);
	size_t i2 = base + 2;
	l = parallel_copy(l, i1);     // copy1 at i1+1, i2 shifts to i2+1
	l = parallel_copy(l, i2 + 1); // copy2 at i2+2
	l = band_sum(l, i1, i2 + 1);  // orig2 into orig1; copy2 now at i2+1
	l = band_sum(l, i1 + 1, i2 + 1); // copy2 into copy1

	if (f == ElementaryFlavor::HTrivial)
		l = delete_component(l, i1 + 1);

	std::vector<std::string> names;
	bool a_variant = v == ElementaryVariant::A;
	names.push_back("gamma");
	if (pre)
		names.push_back("g");
	if (a_variant) {
		names.push_back("x");
		names.push_back("y");
		if (f != ElementaryFlavor::HTrivial)
			names.push_back("z");
	} else {
		names.push_back("y");
		if (f != ElementaryFlavor::HTrivial)
			names.push_back("z");
		names.push_back("x");
	}
	names.push_back("w");
	for (size_t i = 0; i < l.components.size(); ++i)
		l.components[i].name = names[i];
	return l;
}

} // namespace linkhom
