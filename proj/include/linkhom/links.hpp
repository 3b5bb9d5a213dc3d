#pragma once

#include <optional>
#include <string>
#include <vector>

#include "linkhom/magnus.hpp"
#include "linkhom/words.hpp"

namespace linkhom {

enum class Ambient : uint8_t { Sphere, SolidTorus };

// The shared placeholder standing for the companion longitude in solid-torus
// patterns; substituted away by satellite / with_meridian / embed_standard.
Generator lambda_symbol();

// A meridian generator never handed out before.
Generator fresh_meridian();

struct Component {
	std::string name;
	Generator meridian; // anonymous interned generator; names are labels
	int framing = 0;    // always 0 in this calculus
	Word longitude;
};

// A link encoded by, for each component, the word its 0-framed parallel
// traces in the meridians of the other components (plus lambda_symbol() when
// the ambient is a solid torus).
struct LinkPresentation {
	Ambient ambient = Ambient::Sphere;
	std::vector<Component> components;

	size_t index_of(const std::string &name) const; // throws if absent
	const Component &component(const std::string &name) const;
	int lk(size_t i, size_t j) const;
	bool linking_symmetric() const;
	std::vector<Generator> meridians() const;
};

// A link in a solid torus together with the class of the torus meridian in
// the complement of the pattern (zero winding in every pattern meridian).
struct Pattern {
	LinkPresentation link; // ambient SolidTorus
	Word meridian_class;

	bool winding_zero() const;
};

// --- constructors -----------------------------------------------------------

LinkPresentation hopf();
LinkPresentation unlink(int n);

Pattern trivial_pattern();
Pattern bing_pattern();
// Clasped winding-zero double of the core; band conjugator fixed to the
// companion-longitude class so the torus meridian reads [w, w^Lambda].
Pattern whitehead_pattern();
// whitehead_pattern with an untwisted parallel copy of its single component.
Pattern fig3_pattern();

struct GbrNode {
	enum class Kind : uint8_t { Leaf, Bing, Ramify };
	Kind kind = Kind::Leaf;
	std::vector<GbrNode> children; // Bing: exactly 2; Ramify: r >= 1

	static GbrNode leaf() { return GbrNode{}; }
	static GbrNode bing(GbrNode a, GbrNode b);
	static GbrNode ramify(std::vector<GbrNode> children);
	bool well_formed() const;
};

struct GbrSpec {
	GbrNode first = GbrNode::leaf();
	GbrNode second = GbrNode::leaf();
};

// Folds the spec over hopf(); components are renamed l0, l1, ... in order.
LinkPresentation gbr(const GbrSpec &spec);

// --- satellite-type operators ----------------------------------------------

// Replaces component i by the pattern: pattern longitudes get
// Lambda -> (l_i)^c, every other longitude gets m_i -> c mu c^-1.
LinkPresentation satellite(const LinkPresentation &link, size_t i,
                           const Pattern &pattern, const Word &c = Word{});
// Same, threading the substitution through the base meridian class as well.
Pattern satellite(const Pattern &base, size_t i, const Pattern &pattern,
                  const Word &c = Word{});

LinkPresentation bing_double(const LinkPresentation &link, size_t i);
Pattern bing_double(const Pattern &base, size_t i);
LinkPresentation ramify(const LinkPresentation &link, size_t i, int r);

LinkPresentation parallel_copy(const LinkPresentation &link, size_t i);
Pattern parallel_copy(const Pattern &base, size_t i);
LinkPresentation delete_component(const LinkPresentation &link, size_t i);

// Merges component j into component i along a band with conjugator c:
// l_i' = l_i . c l_j c^-1, and m_j -> c^-1 m_i c everywhere else.
LinkPresentation band_sum(const LinkPresentation &link, size_t i, size_t j,
                          const Word &c = Word{});
Pattern band_sum(const Pattern &base, size_t i, size_t j,
                 const Word &c = Word{});

// 0-framed slide of component i over component j (sign -1 slides over the
// reversed parallel): l_i' = l_i . c l_j^{sign} c^-1 and, dually, the
// stationary meridian rewrites as m_j -> m_j . c^-1 m_i^{sign} c in every
// other longitude. The rule is frozen by the Hopf linking matrix and the
// elementary-link split oracle in the tests.
LinkPresentation handle_slide(const LinkPresentation &link, size_t i, size_t j,
                              const Word &c = Word{}, int sign = 1);

// Solid-torus pattern -> sphere link, adding the torus meridian as a
// component Lambda with longitude mu (Lambda-symbol becomes its meridian).
LinkPresentation with_meridian(const Pattern &pattern);
// Inverse direction: re-read a sphere link as a pattern in the complement of
// component i. Component i's longitude becomes the meridian class and its
// meridian becomes the companion-longitude symbol; inverts with_meridian.
Pattern complement_pattern(const LinkPresentation &link, size_t i);
// Standard inclusion of the solid torus: Lambda-symbol -> 1.
LinkPresentation embed_standard(const Pattern &pattern);

LinkPresentation split_union(const LinkPresentation &a,
                             const LinkPresentation &b);

// --- invariants -------------------------------------------------------------

struct HTrivialWitness {
	std::string component; // whose longitude fails
	std::string copied;    // set by the plus-variants
	Monomial mono;
	int64_t coeff;
};

// Degree cap used for solid-torus checks: components + 4 (smallest cap that
// separates the clasped pattern from the standard one).
int torus_degree_cap(const LinkPresentation &link);

std::optional<HTrivialWitness> h_trivial_witness(const LinkPresentation &link);
bool is_h_trivial(const LinkPresentation &link);
std::optional<HTrivialWitness> h_trivial_witness_in_torus(const Pattern &p);
bool is_h_trivial_in_torus(const Pattern &p);

// Witness search for parallel_copy(base, i) given that `base` itself has
// already been checked h-trivial: longitudes word-identical to base expand
// identically and are skipped. Sphere links only (the solid-torus degree cap
// depends on the component count).
std::optional<HTrivialWitness>
h_trivial_copy_witness(const LinkPresentation &copied,
                       const LinkPresentation &base);

std::optional<HTrivialWitness>
h_trivial_plus_witness(const LinkPresentation &link, int jobs = 1);
bool is_h_trivial_plus(const LinkPresentation &link, int jobs = 1);
std::optional<HTrivialWitness> h_trivial_plus_witness_in_torus(const Pattern &p,
                                                               int jobs = 1);
bool is_h_trivial_plus_in_torus(const Pattern &p, int jobs = 1);

// Raw Magnus coefficient of x_{i_1}...x_{i_k} in the longitude of j;
// indeterminacy is not quotiented.
int64_t mu_bar(const LinkPresentation &link, const std::vector<size_t> &idx,
               size_t j);

// NoRepeat-ring expansion of the longitude of component i over the other
// meridians (own meridian projected away; Lambda unbounded in a torus).
Series longitude_series(const LinkPresentation &link, size_t i);

} // namespace linkhom
