#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "linkhom/words.hpp"

using namespace linkhom;

namespace {

Generator g(int i) { return intern_generator("g", i); }

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

} // namespace

TEST_CASE("free reduction") {
	Word a(g(1));
	CHECK(mul(a, inv(a)).empty());

	std::vector<Letter> l = {{g(1).id, 1}, {g(2).id, 1}, {g(2).id, -1},
	                         {g(1).id, 1}};
	Word w = Word::reduce(l);
	CHECK(w.size() == 2);
	CHECK(w == mul(Word(g(1)), Word(g(1))));

	// idempotence
	CHECK(Word::reduce(w.letters()) == w);

	// nested cancellation
	std::vector<Letter> m = {{g(1).id, 1}, {g(2).id, 1}, {g(2).id, -1},
	                         {g(1).id, -1}};
	CHECK(Word::reduce(m).empty());
}

TEST_CASE("group operations") {
	Word x(g(1)), y(g(2));
	Word b = brack(x, y);
	CHECK(b.size() == 4);
	CHECK(b == mul(mul(inv(x), inv(y)), mul(x, y)));
	CHECK(brack(x, x).empty());

	Word c(g(3));
	CHECK(conj(b, c) == mul(mul(inv(c), b), c));
}

TEST_CASE("word identities, randomized") {
	std::mt19937 rng(12345);
	for (int trial = 0; trial < 200; ++trial) {
		Word u = random_word(rng, 6, 4);
		Word v = random_word(rng, 6, 4);
		Word w = random_word(rng, 6, 4);

		CHECK(mul(mul(u, v), w) == mul(u, mul(v, w)));
		CHECK(mul(u, inv(u)).empty());
		CHECK(conj(brack(u, v), w) == brack(conj(u, w), conj(v, w)));

		// [x,yz] = [x,z].[x,y]^z  and  [xz,y] = [x,y]^z.[z,y]
		CHECK(brack(u, mul(v, w)) ==
		      mul(brack(u, w), conj(brack(u, v), w)));
		CHECK(brack(mul(u, w), v) ==
		      mul(conj(brack(u, v), w), brack(w, v)));

		// [x,y^-1] = [y,x]^(y^-1)  and  [x^-1,y] = [y,x]^(x^-1)
		CHECK(brack(u, inv(v)) == conj(brack(v, u), inv(v)));
		CHECK(brack(inv(u), v) == conj(brack(v, u), inv(u)));
	}
}

TEST_CASE("commutator expressions") {
	CommExpr x = CommExpr::gen(g(1));
	CommExpr y = CommExpr::gen(g(2));
	CommExpr z = CommExpr::gen(g(3));

	Word bw = CommExpr::bracket(x, y).expand();
	CHECK(bw == brack(Word(g(1)), Word(g(2))));

	// left-normed [x,y,z] = [[x,y],z]
	Word ln = CommExpr::left_normed({x, y, z}).expand();
	CHECK(ln == brack(brack(Word(g(1)), Word(g(2))), Word(g(3))));

	CHECK(CommExpr::conjugate(x, y).expand() ==
	      conj(Word(g(1)), Word(g(2))));
	CHECK(CommExpr::inverse(x).expand() == inv(Word(g(1))));
	CHECK(CommExpr::prod({x, y}).expand() == mul(Word(g(1)), Word(g(2))));
}

TEST_CASE("substitute") {
	Word w = brack(Word(g(1)), Word(g(2)));
	Word r = mul(Word(g(3)), Word(g(4)));
	Word s = substitute(w, g(1), r);
	CHECK(s == brack(r, Word(g(2))));
	CHECK(substitute(w, g(7), r) == w);
}

TEST_CASE("split_product_identities certificates") {
	// single generators
	{
		auto cert = split_product_identities(Word(g(1)), Word(g(2)), Word(g(3)));
		CHECK(cert.replay());
	}
	// degenerate z
	{
		auto cert = split_product_identities(Word(g(1)), Word(g(2)), Word{});
		CHECK(cert.replay());
		CHECK(cert.second_slot.size() == 1);
		CHECK(cert.first_slot.size() == 1);
	}
	// randomized words
	std::mt19937 rng(777);
	for (int trial = 0; trial < 100; ++trial) {
		Word x = random_word(rng, 6, 4);
		Word y = random_word(rng, 6, 4);
		Word z = random_word(rng, 6, 4);
		auto cert = split_product_identities(x, y, z);
		CHECK(cert.replay());
	}
}
