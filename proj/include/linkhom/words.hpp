#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <string>
#include <vector>

namespace linkhom {

enum class GenRole : uint8_t { Meridian, Auxiliary, Lambda };

// Generators are interned by (name, index); equality of generators, and hence
// of words, is id equality.
struct Generator {
	uint32_t id = 0;

	bool operator==(const Generator &) const = default;
	auto operator<=>(const Generator &) const = default;

	const std::string &name() const;
	int index() const;
	GenRole role() const;
	// Display form: "name" when index < 0, else "name<index>".
	std::string display() const;
};

Generator intern_generator(const std::string &name, int index = -1,
                           GenRole role = GenRole::Meridian);
// Looks up an existing generator by display name; interns a meridian if absent.
Generator generator_named(const std::string &display);

struct Letter {
	uint32_t gen = 0;
	int8_t sign = 1; // +1 or -1

	bool operator==(const Letter &) const = default;
};

// A freely reduced word in the free group on the interned generators.
// Immutable value type; construction reduces eagerly, so equality is
// letter-sequence equality.
class Word {
  public:
	Word() = default;
	explicit Word(Generator g, int sign = 1);

	static Word reduce(std::span<const Letter> letters);

	const std::vector<Letter> &letters() const { return letters_; }
	bool empty() const { return letters_.empty(); }
	size_t size() const { return letters_.size(); }

	bool operator==(const Word &) const = default;

	// Sum of signs of occurrences of g.
	int exponent_sum(Generator g) const;
	bool contains(Generator g) const;
	std::vector<Generator> support() const;

	std::string str() const;

  private:
	explicit Word(std::vector<Letter> reduced) : letters_(std::move(reduced)) {}
	std::vector<Letter> letters_;
	friend Word mul(const Word &, const Word &);
	friend Word inv(const Word &);
};

Word mul(const Word &u, const Word &v);
Word inv(const Word &u);
// a^c = c^-1 a c
Word conj(const Word &u, const Word &c);
// [u,v] = u^-1 v^-1 u v
Word brack(const Word &u, const Word &v);

// Substitutes each occurrence of g^s by r^s and reduces.
Word substitute(const Word &w, Generator g, const Word &r);

// Structured commutator expressions: Gen | Prod | Inv | Conj | Brack.
class CommExpr {
  public:
	enum class Kind : uint8_t { Gen, Prod, Inv, Conj, Brack };

	static CommExpr gen(Generator g);
	static CommExpr prod(std::vector<CommExpr> children);
	static CommExpr inverse(CommExpr e);
	static CommExpr conjugate(CommExpr base, CommExpr by);
	static CommExpr bracket(CommExpr left, CommExpr right);
	// [e1,...,en] nested as [[...[e1,e2],...],en]
	static CommExpr left_normed(std::vector<CommExpr> entries);

	Kind kind() const;
	Generator gen_value() const;
	const std::vector<CommExpr> &children() const;

	Word expand() const;
	std::string str() const;

  private:
	struct Node;
	std::shared_ptr<const Node> node_;
};

// The word as a flat Prod of (possibly inverted) generator leaves.
CommExpr word_expr(const Word &w);

// Writes w as [u, v] with u, v nonempty, when possible.
std::optional<std::pair<Word, Word>> split_commutator(const Word &w);

// Recursive bracket parse; unsplittable segments become flat word leaves.
CommExpr commutator_shape(const Word &w);

// Best-effort recovery of bracket / conjugate / product structure. The result
// always expands back to w exactly; segments with no visible structure stay
// flat. Expanding the structured form through a filtered ring is far cheaper
// than expanding the flat word, because subtrees collapse over their own
// supports first.
CommExpr structure_expr(const Word &w);

// One factor base^conjugator of a product-splitting identity.
struct ConjFactor {
	Word base;
	Word conjugator; // factor value is conj(base, conjugator)
	Word value() const { return conj(base, conjugator); }
};

// Certificate for the two splitting identities
//   [x, yz] = [x,z] . [x,y]^z      and      [xz, y] = [x,y]^z . [z,y].
// Replaying either factor list in order reproduces the expanded left side
// exactly in the free group.
struct ProductSplitCertificate {
	Word x, y, z;
	std::vector<ConjFactor> second_slot; // factors of [x, yz]
	std::vector<ConjFactor> first_slot;  // factors of [xz, y]

	bool replay() const;
};

ProductSplitCertificate split_product_identities(const Word &x, const Word &y,
                                                 const Word &z);

} // namespace linkhom
