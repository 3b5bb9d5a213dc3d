#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "linkhom/milnor.hpp"

using namespace linkhom;

namespace {

Generator g(int i) { return intern_generator("g", i); }

GeneratorContext ctx_n(int n) {
	GeneratorContext ctx;
	for (int i = 1; i <= n; ++i)
		ctx.meridians.push_back(g(i));
	return ctx;
}

Word random_word(std::mt19937 &rng, int max_len, int num_gens) {
	std::uniform_int_distribution<int> len_dist(0, max_len);
	std::uniform_int_distribution<int> gen_dist(1, num_gens);
	std::uniform_int_distribution<int> sign_dist(0, 1);
	std::vector<Letter> letters;
	int n = len_dist(rng);
	for (int i = 0; i < n; ++i)
		letters.push_back(Letter{g(gen_dist(rng)).id,
		                         static_cast<int8_t>(sign_dist(rng) ? 1 : -1)});
	return Word::reduce(letters);
}

// All non-repeating monomials over the context meridians, up to full degree.
std::vector<Monomial> non_repeating_monomials(const GeneratorContext &ctx) {
	std::vector<Monomial> out;
	std::vector<Monomial> frontier = {Monomial{}};
	for (size_t d = 0; d < ctx.meridians.size(); ++d) {
		std::vector<Monomial> next;
		for (const Monomial &m : frontier) {
			for (const Generator &gen : ctx.meridians) {
				bool used = false;
				for (uint32_t v : m.vars)
					used |= v == gen.id;
				if (used)
					continue;
				Monomial e = m;
				e.vars.push_back(gen.id);
				next.push_back(e);
			}
		}
		out.insert(out.end(), next.begin(), next.end());
		frontier = std::move(next);
	}
	return out;
}

} // namespace

TEST_CASE("milnor_relator") {
	auto ctx = ctx_n(4);
	CHECK(milnor_relator(ctx, 0, Word{}).empty()); // [g,g] = 1

	Word rel = milnor_relator(ctx, 0, Word(g(2)));
	CHECK(rel == brack(Word(g(1)), conj(Word(g(1)), Word(g(2)))));
	CHECK(is_milnor_trivial(rel, ctx));

	CHECK_THROWS(milnor_relator(ctx, 7, Word{}));

	// every non-repeating coefficient vanishes, checked by the DP oracle
	std::mt19937 rng(31);
	auto monos = non_repeating_monomials(ctx);
	for (int trial = 0; trial < 20; ++trial) {
		std::uniform_int_distribution<int> idx(0, 3);
		Word y = random_word(rng, 5, 4);
		Word r = milnor_relator(ctx, idx(rng), y);
		for (const Monomial &m : monos)
			CHECK(coefficient(r, m) == 0);
	}
}

TEST_CASE("engel22_relator") {
	auto ctx = ctx_n(4);

	// i = j, trivial conjugators
	CHECK(engel22_relator(ctx, 0, Word{}, Word{}, 0, Word{}, Word{}).empty());

	// i != j with crossing conjugators
	Word r = engel22_relator(ctx, 0, Word(g(2)), Word{}, 1, Word(g(1)), Word{});
	CHECK(expand_word(r, RepeatPolicy::plus()).is_one());

	// randomized instances: surviving monomials of the full expansion would
	// need two distinct doubled indices or a tripled one, so none survive
	std::mt19937 rng(47);
	std::uniform_int_distribution<int> idx(0, 3);
	for (int trial = 0; trial < 30; ++trial) {
		Word r2 = engel22_relator(ctx, idx(rng), random_word(rng, 4, 4),
		                          random_word(rng, 4, 4), idx(rng),
		                          random_word(rng, 4, 4),
		                          random_word(rng, 4, 4));
		CHECK(expand_word(r2, RepeatPolicy::plus()).is_one());
	}
}

TEST_CASE("is_milnor_trivial") {
	auto ctx = ctx_n(3);
	CHECK(is_milnor_trivial(milnor_relator(ctx, 1, Word(g(1))), ctx));
	CHECK_FALSE(is_milnor_trivial(brack(Word(g(1)), Word(g(2))), ctx));

	// [g1,g2,g2]: every term doubles x2
	Word w = brack(brack(Word(g(1)), Word(g(2))), Word(g(2)));
	CHECK(is_milnor_trivial(w, ctx));
}

TEST_CASE("equiv22_check") {
	auto ctx = ctx_n(4);
	std::mt19937 rng(53);
	Word v = random_word(rng, 6, 4);
	CHECK(equiv22_check(v, v, ctx));

	Word rel = engel22_relator(ctx, 0, Word(g(2)), Word(g(3)), 1, Word(g(1)),
	                           Word{});
	CHECK(equiv22_check(mul(rel, v), v, ctx));
	CHECK_FALSE(equiv22_check(brack(Word(g(1)), Word(g(2))), Word{}, ctx));
}

TEST_CASE("equiv22 congruence compatibility") {
	auto ctx = ctx_n(4);
	std::mt19937 rng(59);
	for (int trial = 0; trial < 15; ++trial) {
		Word v = random_word(rng, 4, 4);
		Word rel = engel22_relator(ctx, 0, random_word(rng, 3, 4),
		                           random_word(rng, 3, 4), 1,
		                           random_word(rng, 3, 4),
		                           random_word(rng, 3, 4));
		Word u = mul(rel, v);
		REQUIRE(equiv22_check(u, v, ctx));

		Word c = random_word(rng, 3, 4);
		CHECK(equiv22_check(conj(u, c), conj(v, c), ctx));
		Word z = random_word(rng, 3, 4);
		CHECK(equiv22_check(brack(u, z), brack(v, z), ctx));
	}
}

TEST_CASE("lcs_degree") {
	CHECK(lcs_degree(brack(Word(g(1)), Word(g(2))), 6) == 2);
	CHECK(lcs_degree(Word{}, 6) == std::nullopt);
	CHECK(lcs_degree(Word(g(1)), 6) == 1);

	for (int k = 2; k <= 5; ++k) {
		std::vector<CommExpr> entries;
		for (int i = 1; i <= k; ++i)
			entries.push_back(CommExpr::gen(g(i)));
		Word w = CommExpr::left_normed(entries).expand();
		CHECK(lcs_degree(w, 6) == k);
	}

	// [pi^p, pi^q] subset pi^(p+q)
	std::mt19937 rng(61);
	for (int trial = 0; trial < 10; ++trial) {
		Word u = brack(random_word(rng, 3, 3), random_word(rng, 3, 3));
		Word v = brack(random_word(rng, 3, 3), random_word(rng, 3, 3));
		auto du = lcs_degree(u, 8), dv = lcs_degree(v, 8);
		if (!du || !dv)
			continue;
		auto db = lcs_degree(brack(u, v), 8);
		if (db)
			CHECK(*db >= *du + *dv);
	}
}
