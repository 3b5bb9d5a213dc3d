#pragma once

#include <optional>
#include <vector>

#include "linkhom/links.hpp"
#include "linkhom/magnus.hpp"
#include "linkhom/milnor.hpp"
#include "linkhom/words.hpp"

namespace linkhom {

// Left-normed k-fold commutator whose entries are single generators except
// for two equal slots p < q holding the product a*b.
struct AlmostBasic {
	size_t p = 0, q = 1; // 0-based doubled slots
	Generator a, b;
	std::vector<Generator> rest; // the k-2 single-generator slots in order

	int length() const { return static_cast<int>(rest.size()) + 2; }
	bool well_formed() const;
	std::vector<Word> entries() const; // throws std::invalid_argument
};

CommExpr almost_basic_expr(const AlmostBasic &ab);
Word almost_basic_expand(const AlmostBasic &ab);

enum class BasisKind : uint8_t {
	Full,
	// First slot stays a single generator (needed from five-fold length on).
	FirstEntryGenerator,
};

// All well-formed length-n elements over ctx, each using every generator
// once; enumerated positions-first, then product pair a<b, then arrangements
// of the remaining generators.
std::vector<AlmostBasic> almost_basic_basis(const std::vector<Generator> &ctx,
                                            BasisKind kind = BasisKind::Full);

struct DecompositionTerm {
	AlmostBasic basic;
	Word conjugator; // defaults to the empty word; immaterial at top degree
	int64_t exponent = 0;
};

struct Decomposition {
	std::vector<DecompositionTerm> terms;
	Series residual; // zero iff ok
	bool ok = false;

	Word value() const;
	CommExpr value_expr() const;
};

// Matches every non-repeating degree-n coefficient of target by an exact
// integer combination of basis expansions. Requires target in the n-th lower
// central term; an unsolvable system is reported through ok=false/residual,
// never silently.
Decomposition decompose_top_degree(const Word &target,
                                   const std::vector<Generator> &ctx,
                                   BasisKind kind = BasisKind::Full);

// Degree-n part of the no-repeat expansion over ctx.
Series top_degree_series(const Word &w, const std::vector<Generator> &ctx);

// --- exact bracket splitting ------------------------------------------------

// One multiplicand of a slot of a bracket: value = conj(core, conjugator)^sign.
struct BracketAtom {
	Word core;
	Word conjugator;
	int sign = 1;
	std::optional<AlmostBasic> basic; // set when core expands an AlmostBasic

	Word value() const;
};

struct BracketFactor {
	enum class Shape : uint8_t { CBeta, AlphaC, CC, Plain };
	Shape shape = Shape::Plain;
	Word left, right, conjugator; // value = conj(brack(left,right), conjugator)
	// Slot provenance: unconjugated cores, and the basics when present.
	// left == conj(left_core, left_conj) and likewise on the right, so a
	// consumer can re-conjugate at the leaf level.
	Word left_core, right_core;
	Word left_conj, right_conj;
	std::optional<AlmostBasic> left_basic, right_basic;

	Word value() const { return conj(brack(left, right), conjugator); }
};

// Exact free-group identity: the ordered product of the returned factors
// equals [prod(left), prod(right)]. Inverted slots are normalized away with
// [x^-1,y] = [y,x]^{x^-1} and its mirror, so factor slots carry no outer
// inverses.
std::vector<BracketFactor>
split_bracket_product(const std::vector<BracketAtom> &left,
                      const std::vector<BracketAtom> &right);

// --- the W construction -----------------------------------------------------

struct WCertificate {
	Word alpha, beta, alpha_prime, beta_prime;
	Word gamma1, gamma2, gamma3;
	std::vector<BracketFactor> factors; // ordered product equals w
	Word w;
	CommExpr w_expr;   // structured form of w (for tractable expansions)
	CommExpr lhs_expr; // [alpha, beta]

	// Replays the exact identity
	//   [a a'^-1, b'^-1 b] = [a,b]^{g1} . [a,b'^-1]^{g2} . [a'^-1,b]
	//                        . [a'^-1,b'^-1]^{g3}
	// and checks w is the conjugated inverse of the three right factors and
	// the factor-list product. Pure free-group word equality throughout.
	bool replay() const;
};

struct Lemma51Result {
	Word w;
	WCertificate cert;
};

// Builds W with [alpha,beta] equivalent to W modulo the (2,2)-relators and
// W in the 2k-th lower central term. alpha_dec/beta_dec must re-expand to
// alpha/beta in the Milnor group (checked).
Lemma51Result lemma51_W(const CommExpr &alpha, const CommExpr &beta,
                        const Decomposition &alpha_dec,
                        const Decomposition &beta_dec, int k);

struct Lemma52Result {
	Lemma51Result w1, w2;
};

Lemma52Result lemma52(const CommExpr &a1, const CommExpr &b1,
                      const Decomposition &a1_dec, const Decomposition &b1_dec,
                      const CommExpr &a2, const CommExpr &b2,
                      const Decomposition &a2_dec, const Decomposition &b2_dec,
                      int k);

// Certified structural lower bound for lcs_degree: generators count 1,
// brackets add, products and conjugates take the minimum of their pieces.
// INT_MAX/2 stands in for "identity".
int lcs_lower_bound(const CommExpr &e);

// --- elementary links -------------------------------------------------------

enum class ElementaryVariant : uint8_t { A, B }; // [x,yz,yz,w] / [yz,x,yz,w]
enum class ElementaryFlavor : uint8_t {
	Essential, // doubled product entries; homotopically essential
	HTrivial,  // parallel component z removed; homotopically trivial
	Prepended, // an extra band-free component g in front: [g, gamma]
};

// Built entirely from gbr + parallel_copy + band_sum so every longitude is
// machine-generated. Components are named gamma, (g,) x, y, z, w.
LinkPresentation elementary_link(ElementaryVariant v, ElementaryFlavor f);

} // namespace linkhom
