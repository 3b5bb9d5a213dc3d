#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "linkhom/engel.hpp"

using namespace linkhom;

namespace {

Generator g(int i) { return intern_generator("g", i); }

std::vector<Generator> ctx_n(int n) {
	std::vector<Generator> out;
	for (int i = 1; i <= n; ++i)
		out.push_back(g(i));
	return out;
}

CommExpr basic_expr(const std::vector<Generator> &gens) {
	std::vector<CommExpr> es;
	for (Generator gen : gens)
		es.push_back(CommExpr::gen(gen));
	return CommExpr::left_normed(std::move(es));
}

Word random_word(std::mt19937 &rng, const std::vector<Generator> &gens,
                 int max_len) {
	std::uniform_int_distribution<int> len_dist(0, max_len);
	std::uniform_int_distribution<size_t> gen_dist(0, gens.size() - 1);
	std::uniform_int_distribution<int> sign_dist(0, 1);
	std::vector<Letter> letters;
	int n = len_dist(rng);
	for (int i = 0; i < n; ++i)
		letters.push_back(Letter{gens[gen_dist(rng)].id,
		                         static_cast<int8_t>(sign_dist(rng) ? 1 : -1)});
	return Word::reduce(letters);
}

bool plus_equal(const CommExpr &u, const CommExpr &v) {
	RepeatPolicy p = RepeatPolicy::plus();
	return expand_expr(u, p) == expand_expr(v, p);
}

// postcondition bundle shared by the lemma suites
void check_lemma51(const Lemma51Result &res, int k) {
	CHECK(res.cert.replay());
	CHECK(plus_equal(res.cert.lhs_expr, res.cert.w_expr));
	CHECK(lcs_lower_bound(res.cert.w_expr) >= 2 * k);
	CHECK_FALSE(lcs_degree(res.cert.w_expr, 2 * k - 1).has_value());
}

} // namespace

TEST_CASE("almost basic expansion") {
	auto c4 = ctx_n(4);
	AlmostBasic ab;
	ab.p = 1;
	ab.q = 2;
	ab.a = c4[1];
	ab.b = c4[2];
	ab.rest = {c4[0], c4[3]};
	Word yz = mul(Word(c4[1]), Word(c4[2]));
	Word expect = brack(brack(brack(Word(c4[0]), yz), yz), Word(c4[3]));
	CHECK(almost_basic_expand(ab) == expect);

	AlmostBasic ab2 = ab;
	ab2.p = 0;
	ab2.q = 2;
	Word expect2 = brack(brack(brack(yz, Word(c4[0])), yz), Word(c4[3]));
	CHECK(almost_basic_expand(ab2) == expect2);

	AlmostBasic bad = ab;
	bad.b = bad.a; // degenerate doubled product
	CHECK_THROWS(almost_basic_expand(bad));
	AlmostBasic bad2 = ab;
	bad2.rest = {c4[0], c4[0]};
	CHECK_THROWS(almost_basic_expand(bad2));
}

TEST_CASE("basis enumeration") {
	auto c4 = ctx_n(4);
	auto full = almost_basic_basis(c4);
	// (C(4,2)-1) position pairs (the degenerate (0,1) drops) * C(4,2) * 2!
	CHECK(full.size() == 60);
	for (const AlmostBasic &ab : full)
		CHECK(ab.well_formed());

	auto restricted = almost_basic_basis(c4, BasisKind::FirstEntryGenerator);
	CHECK(restricted.size() == 36);
	for (const AlmostBasic &ab : restricted)
		CHECK(ab.p >= 1);

	CHECK(almost_basic_basis(ctx_n(5), BasisKind::FirstEntryGenerator).size() ==
	      360);
}

TEST_CASE("basis elements are essential and collapse when a doubled factor "
          "drops") {
	auto c4 = ctx_n(4);
	for (const AlmostBasic &ab : almost_basic_basis(c4)) {
		Series top = top_degree_series(almost_basic_expand(ab), c4);
		CHECK_FALSE(top.is_zero());

		// replace the doubled product by its first factor alone
		std::vector<Word> entries = ab.entries();
		entries[ab.p] = Word(ab.a);
		entries[ab.q] = Word(ab.a);
		std::vector<CommExpr> es;
		for (const Word &e : entries)
			es.push_back(word_expr(e));
		Word collapsed = CommExpr::left_normed(es).expand();
		CHECK(expand_word(collapsed, RepeatPolicy::no_repeat()).is_one());
	}
}

TEST_CASE("decompose: identity and trivial cases") {
	auto c4 = ctx_n(4);
	auto basis = almost_basic_basis(c4);
	Decomposition d = decompose_top_degree(almost_basic_expand(basis[17]), c4);
	REQUIRE(d.ok);
	REQUIRE(d.terms.size() == 1);
	CHECK(d.terms[0].exponent == 1);
	CHECK(d.terms[0].conjugator.empty());
	CHECK(almost_basic_expand(d.terms[0].basic) ==
	      almost_basic_expand(basis[17]));
	CHECK(d.residual.is_zero());

	Decomposition e = decompose_top_degree(Word{}, c4);
	CHECK(e.ok);
	CHECK(e.terms.empty());

	// below the top lower-central term
	CHECK_THROWS(decompose_top_degree(brack(Word(g(1)), Word(g(2))), c4));
}

TEST_CASE("decompose basic commutators") {
	auto c4 = ctx_n(4);
	Word target = basic_expr(c4).expand(); // [g1,g2,g3,g4]
	Decomposition d = decompose_top_degree(target, c4);
	REQUIRE(d.ok);
	CHECK(d.residual.is_zero());
	CHECK_FALSE(d.terms.empty());

	// two-sided oracle: the re-expansion reproduces the target's full
	// non-repeating degree-4 coefficient vector
	CHECK(top_degree_series(d.value(), c4) == top_degree_series(target, c4));
	// and agrees with the target everywhere in the no-repeat ring
	CHECK(expand_word(d.value(), RepeatPolicy::no_repeat()) ==
	      expand_word(target, RepeatPolicy::no_repeat()));
}

TEST_CASE("decompose five-fold with generator-first basis") {
	auto c5 = ctx_n(5);
	Word target = basic_expr(c5).expand();
	Decomposition d =
	    decompose_top_degree(target, c5, BasisKind::FirstEntryGenerator);
	REQUIRE(d.ok);
	for (const DecompositionTerm &t : d.terms)
		CHECK(t.basic.p >= 1);
	CHECK(top_degree_series(d.value(), c5) == top_degree_series(target, c5));
}

TEST_CASE("bracket product splitting replays exactly") {
	std::mt19937 rng(401);
	auto c6 = ctx_n(6);
	std::uniform_int_distribution<int> cnt(1, 3);
	std::uniform_int_distribution<int> sgn(0, 1);
	for (int trial = 0; trial < 20; ++trial) {
		auto atoms = [&](int n) {
			std::vector<BracketAtom> out;
			for (int i = 0; i < n; ++i) {
				BracketAtom a;
				a.core = brack(random_word(rng, c6, 3), random_word(rng, c6, 3));
				a.conjugator = random_word(rng, c6, 2);
				a.sign = sgn(rng) ? 1 : -1;
				out.push_back(a);
			}
			return out;
		};
		auto left = atoms(cnt(rng));
		auto right = atoms(cnt(rng));
		Word lv, rv;
		for (const BracketAtom &a : left)
			lv = mul(lv, a.value());
		for (const BracketAtom &a : right)
			rv = mul(rv, a.value());
		Word prod;
		for (const BracketFactor &f : split_bracket_product(left, right))
			prod = mul(prod, f.value());
		CHECK(prod == brack(lv, rv));
	}
}

TEST_CASE("lemma 5.1: trivial instance") {
	auto c4 = ctx_n(4);
	Decomposition empty = decompose_top_degree(Word{}, c4);
	Lemma51Result r =
	    lemma51_W(word_expr(Word{}), word_expr(Word{}), empty, empty, 4);
	CHECK(r.w.empty());
	CHECK(r.cert.replay());
	CHECK(r.cert.factors.empty());
}

TEST_CASE("lemma 5.1: disjoint 4-fold commutators in 8 generators") {
	auto c8 = ctx_n(8);
	std::vector<Generator> first(c8.begin(), c8.begin() + 4);
	std::vector<Generator> second(c8.begin() + 4, c8.end());
	CommExpr alpha = basic_expr(first);
	CommExpr beta = basic_expr(second);
	Decomposition ad = decompose_top_degree(alpha.expand(), first);
	Decomposition bd = decompose_top_degree(beta.expand(), second);
	REQUIRE(ad.ok);
	REQUIRE(bd.ok);

	Lemma51Result r = lemma51_W(alpha, beta, ad, bd, 4);
	check_lemma51(r, 4);

	// factor shapes cover the three commutator forms
	bool cc = false, cb = false, ac = false;
	for (const BracketFactor &f : r.cert.factors) {
		cc |= f.shape == BracketFactor::Shape::CC;
		cb |= f.shape == BracketFactor::Shape::CBeta;
		ac |= f.shape == BracketFactor::Shape::AlphaC;
	}
	CHECK(cc);
	CHECK(cb);
	CHECK(ac);

	// preconditions are enforced
	Decomposition bogus = decompose_top_degree(Word{}, first);
	CHECK_THROWS(lemma51_W(alpha, beta, bogus, bd, 4));
	Decomposition failed;
	CHECK_THROWS(lemma51_W(alpha, beta, failed, bd, 4));
}

TEST_CASE("lemma 5.1: seeded random instances") {
	std::mt19937 rng(421);
	auto c8 = ctx_n(8);
	for (int trial = 0; trial < 3; ++trial) {
		std::vector<Generator> perm = c8;
		std::shuffle(perm.begin(), perm.end(), rng);
		std::vector<Generator> first(perm.begin(), perm.begin() + 4);
		std::vector<Generator> second(perm.begin() + 4, perm.end());
		CommExpr alpha = basic_expr(first);
		CommExpr beta = basic_expr(second);
		std::sort(first.begin(), first.end());
		std::sort(second.begin(), second.end());
		Decomposition ad = decompose_top_degree(alpha.expand(), first);
		Decomposition bd = decompose_top_degree(beta.expand(), second);
		REQUIRE(ad.ok);
		REQUIRE(bd.ok);
		check_lemma51(lemma51_W(alpha, beta, ad, bd, 4), 4);
	}
}

TEST_CASE("lemma 5.2") {
	auto c8 = ctx_n(8);
	std::vector<Generator> first(c8.begin(), c8.begin() + 4);
	std::vector<Generator> second(c8.begin() + 4, c8.end());
	CommExpr a1 = basic_expr(first);
	CommExpr b1 = basic_expr(second);
	CommExpr a2 = basic_expr({first[1], first[0], first[3], first[2]});
	CommExpr b2 = basic_expr({second[1], second[0], second[3], second[2]});
	Decomposition a1d = decompose_top_degree(a1.expand(), first);
	Decomposition b1d = decompose_top_degree(b1.expand(), second);
	Decomposition a2d = decompose_top_degree(a2.expand(), first);
	Decomposition b2d = decompose_top_degree(b2.expand(), second);
	REQUIRE((a1d.ok && b1d.ok && a2d.ok && b2d.ok));

	Lemma52Result r = lemma52(a1, b1, a1d, b1d, a2, b2, a2d, b2d, 4);
	check_lemma51(r.w1, 4);
	check_lemma51(r.w2, 4);

	CommExpr lhs = CommExpr::bracket(CommExpr::bracket(a1, b1),
	                                 CommExpr::bracket(a2, b2));
	CommExpr rhs =
	    CommExpr::bracket(r.w1.cert.w_expr, r.w2.cert.w_expr);
	CHECK(plus_equal(lhs, rhs));
	CHECK(lcs_lower_bound(rhs) >= 16);
}

TEST_CASE("elementary links") {
	LinkPresentation ea =
	    elementary_link(ElementaryVariant::A, ElementaryFlavor::Essential);
	REQUIRE(ea.components.size() == 5);
	CHECK(ea.components[0].name == "gamma");
	Generator x = ea.component("x").meridian;
	Generator y = ea.component("y").meridian;
	Generator z = ea.component("z").meridian;
	Generator w = ea.component("w").meridian;
	Word yz = mul(Word(y), Word(z));
	CHECK(ea.components[0].longitude ==
	      brack(brack(brack(Word(x), yz), yz), Word(w)));
	CHECK(ea.linking_symmetric());
	auto wit = h_trivial_witness(ea);
	REQUIRE(wit);
	CHECK(wit->mono.degree() == 4);

	LinkPresentation eb =
	    elementary_link(ElementaryVariant::B, ElementaryFlavor::Essential);
	Generator bx = eb.component("x").meridian;
	Generator by = eb.component("y").meridian;
	Generator bz = eb.component("z").meridian;
	Generator bw = eb.component("w").meridian;
	Word byz = mul(Word(by), Word(bz));
	CHECK(eb.components[0].longitude ==
	      brack(brack(brack(byz, Word(bx)), byz), Word(bw)));
	CHECK_FALSE(is_h_trivial(eb));

	LinkPresentation ha =
	    elementary_link(ElementaryVariant::A, ElementaryFlavor::HTrivial);
	REQUIRE(ha.components.size() == 4);
	Generator hy = ha.component("y").meridian;
	CHECK(ha.components[0].longitude ==
	      brack(brack(brack(Word(ha.component("x").meridian), Word(hy)),
	                  Word(hy)),
	            Word(ha.component("w").meridian)));
	CHECK(is_h_trivial(ha));
	// the relevant parallel copy recreates the essential link
	CHECK_FALSE(is_h_trivial(parallel_copy(ha, ha.index_of("y"))));

	LinkPresentation pa =
	    elementary_link(ElementaryVariant::A, ElementaryFlavor::Prepended);
	REQUIRE(pa.components.size() == 6);
	CHECK(pa.components[1].name == "g");
	Generator pg = pa.component("g").meridian;
	Generator px = pa.component("x").meridian;
	Generator py = pa.component("y").meridian;
	Generator pz = pa.component("z").meridian;
	Generator pw = pa.component("w").meridian;
	Word pyz = mul(Word(py), Word(pz));
	Word gamma1 = brack(brack(brack(Word(px), pyz), pyz), Word(pw));
	CHECK(pa.components[0].longitude == brack(Word(pg), gamma1));
}

TEST_CASE("sliding z over y splits the essential link") {
	LinkPresentation ea =
	    elementary_link(ElementaryVariant::A, ElementaryFlavor::Essential);
	size_t zi = ea.index_of("z");
	size_t yi = ea.index_of("y");
	LinkPresentation slid = handle_slide(ea, zi, yi, Word{}, -1);

	// the slid component is a split unknot
	CHECK(slid.components[zi].longitude.empty());
	for (size_t i = 0; i < slid.components.size(); ++i)
		if (i != zi)
			CHECK_FALSE(slid.components[i].longitude.contains(
			    slid.components[zi].meridian));

	// remaining longitudes agree with the h-trivial counterpart in the
	// no-repeat ring under the name correspondence
	LinkPresentation ha =
	    elementary_link(ElementaryVariant::A, ElementaryFlavor::HTrivial);
	for (const Component &hc : ha.components) {
		size_t si = slid.index_of(hc.name);
		Series hs = longitude_series(ha, ha.index_of(hc.name));
		Series ss = longitude_series(slid, si);
		// map monomials through the name correspondence
		std::vector<Series::Term> mapped;
		for (const auto &t : hs.terms()) {
			Monomial m;
			for (uint32_t var : t.mono.vars) {
				for (const Component &oc : ha.components)
					if (oc.meridian.id == var)
						m.vars.push_back(
						    slid.components[slid.index_of(oc.name)]
						        .meridian.id);
			}
			REQUIRE(m.vars.size() == t.mono.vars.size());
			mapped.push_back(Series::Term{m, t.coeff});
		}
		CHECK(Series::from_terms(std::move(mapped)) == ss);
	}
}
