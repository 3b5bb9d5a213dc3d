#include "linkhom/words.hpp"

#include <cassert>
#include <deque>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace linkhom {

namespace {

struct GenRecord {
	std::string name;
	int index;
	GenRole role;
};

struct GenRegistry {
	std::mutex mu;
	std::deque<GenRecord> records;
	std::map<std::pair<std::string, int>, uint32_t> by_key;

	static GenRegistry &instance() {
		static GenRegistry reg;
		return reg;
	}
};

const GenRecord &record(uint32_t id) {
	auto &reg = GenRegistry::instance();
	std::lock_guard lock(reg.mu);
	return reg.records.at(id);
}

} // namespace

Generator intern_generator(const std::string &name, int index, GenRole role) {
	auto &reg = GenRegistry::instance();
	std::lock_guard lock(reg.mu);
	auto key = std::make_pair(name, index);
	auto it = reg.by_key.find(key);
	if (it != reg.by_key.end())
		return Generator{it->second};
	uint32_t id = static_cast<uint32_t>(reg.records.size());
	reg.records.push_back(GenRecord{name, index, role});
	reg.by_key.emplace(key, id);
	return Generator{id};
}

Generator generator_named(const std::string &display) {
	// Split a trailing integer off the name, matching Generator::display().
	size_t pos = display.size();
	while (pos > 0 && std::isdigit(static_cast<unsigned char>(display[pos - 1])))
		--pos;
	if (pos < display.size() && pos > 0) {
		std::string base = display.substr(0, pos);
		int idx = std::stoi(display.substr(pos));
		auto &reg = GenRegistry::instance();
		{
			std::lock_guard lock(reg.mu);
			auto it = reg.by_key.find({base, idx});
			if (it != reg.by_key.end())
				return Generator{it->second};
		}
		return intern_generator(base, idx);
	}
	return intern_generator(display);
}

const std::string &Generator::name() const { return record(id).name; }
int Generator::index() const { return record(id).index; }
GenRole Generator::role() const { return record(id).role; }

std::string Generator::display() const {
	const auto &r = record(id);
	if (r.index < 0)
		return r.name;
	return r.name + std::to_string(r.index);
}

Word::Word(Generator g, int sign) {
	letters_.push_back(Letter{g.id, static_cast<int8_t>(sign >= 0 ? 1 : -1)});
}

Word Word::reduce(std::span<const Letter> letters) {
	std::vector<Letter> out;
	out.reserve(letters.size());
	for (const Letter &l : letters) {
		if (!out.empty() && out.back().gen == l.gen && out.back().sign == -l.sign)
			out.pop_back();
		else
			out.push_back(l);
	}
	return Word(std::move(out));
}

int Word::exponent_sum(Generator g) const {
	int s = 0;
	for (const Letter &l : letters_)
		if (l.gen == g.id)
			s += l.sign;
	return s;
}

bool Word::contains(Generator g) const {
	for (const Letter &l : letters_)
		if (l.gen == g.id)
			return true;
	return false;
}

std::vector<Generator> Word::support() const {
	std::vector<Generator> out;
	for (const Letter &l : letters_) {
		Generator g{l.gen};
		bool seen = false;
		for (const Generator &h : out)
			if (h == g)
				seen = true;
		if (!seen)
			out.push_back(g);
	}
	return out;
}

std::string Word::str() const {
	if (letters_.empty())
		return "1";
	std::ostringstream os;
	for (size_t i = 0; i < letters_.size(); ++i) {
		if (i)
			os << ' ';
		os << Generator{letters_[i].gen}.display();
		if (letters_[i].sign < 0)
			os << "^-1";
	}
	return os.str();
}

Word mul(const Word &u, const Word &v) {
	std::vector<Letter> cat = u.letters_;
	cat.insert(cat.end(), v.letters_.begin(), v.letters_.end());
	return Word::reduce(cat);
}

Word inv(const Word &u) {
	std::vector<Letter> out;
	out.reserve(u.letters_.size());
	for (auto it = u.letters_.rbegin(); it != u.letters_.rend(); ++it)
		out.push_back(Letter{it->gen, static_cast<int8_t>(-it->sign)});
	return Word(std::move(out)); // inverse of reduced word is reduced
}

Word conj(const Word &u, const Word &c) { return mul(mul(inv(c), u), c); }

Word brack(const Word &u, const Word &v) {
	return mul(mul(inv(u), inv(v)), mul(u, v));
}

Word substitute(const Word &w, Generator g, const Word &r) {
	std::vector<Letter> out;
	Word rinv = inv(r);
	for (const Letter &l : w.letters()) {
		if (l.gen == g.id) {
			const Word &rep = l.sign > 0 ? r : rinv;
			out.insert(out.end(), rep.letters().begin(), rep.letters().end());
		} else {
			out.push_back(l);
		}
	}
	return Word::reduce(out);
}

struct CommExpr::Node {
	Kind kind;
	Generator gen{};
	std::vector<CommExpr> children;
};

CommExpr CommExpr::gen(Generator g) {
	auto n = std::make_shared<Node>();
	n->kind = Kind::Gen;
	n->gen = g;
	CommExpr e;
	e.node_ = n;
	return e;
}

CommExpr CommExpr::prod(std::vector<CommExpr> children) {
	auto n = std::make_shared<Node>();
	n->kind = Kind::Prod;
	n->children = std::move(children);
	CommExpr e;
	e.node_ = n;
	return e;
}

CommExpr CommExpr::inverse(CommExpr e) {
	auto n = std::make_shared<Node>();
	n->kind = Kind::Inv;
	n->children = {std::move(e)};
	CommExpr r;
	r.node_ = n;
	return r;
}

CommExpr CommExpr::conjugate(CommExpr base, CommExpr by) {
	auto n = std::make_shared<Node>();
	n->kind = Kind::Conj;
	n->children = {std::move(base), std::move(by)};
	CommExpr r;
	r.node_ = n;
	return r;
}

CommExpr CommExpr::bracket(CommExpr left, CommExpr right) {
	auto n = std::make_shared<Node>();
	n->kind = Kind::Brack;
	n->children = {std::move(left), std::move(right)};
	CommExpr r;
	r.node_ = n;
	return r;
}

CommExpr CommExpr::left_normed(std::vector<CommExpr> entries) {
	if (entries.empty())
		return CommExpr::prod({});
	CommExpr acc = entries[0];
	for (size_t i = 1; i < entries.size(); ++i)
		acc = CommExpr::bracket(acc, entries[i]);
	return acc;
}

CommExpr::Kind CommExpr::kind() const { return node_->kind; }
Generator CommExpr::gen_value() const {
	assert(node_->kind == Kind::Gen);
	return node_->gen;
}
const std::vector<CommExpr> &CommExpr::children() const {
	return node_->children;
}

Word CommExpr::expand() const {
	switch (node_->kind) {
	case Kind::Gen:
		return Word(node_->gen);
	case Kind::Prod: {
		Word w;
		for (const CommExpr &c : node_->children)
			w = mul(w, c.expand());
		return w;
	}
	case Kind::Inv:
		return inv(node_->children[0].expand());
	case Kind::Conj:
		return conj(node_->children[0].expand(), node_->children[1].expand());
	case Kind::Brack:
		return brack(node_->children[0].expand(), node_->children[1].expand());
	}
	throw std::logic_error("bad CommExpr kind");
}

std::string CommExpr::str() const {
	switch (node_->kind) {
	case Kind::Gen:
		return node_->gen.display();
	case Kind::Prod: {
		std::string s;
		for (size_t i = 0; i < node_->children.size(); ++i) {
			if (i)
				s += ' ';
			s += node_->children[i].str();
		}
		return s.empty() ? "()" : s;
	}
	case Kind::Inv:
		return "(" + node_->children[0].str() + ")^-1";
	case Kind::Conj:
		return "(" + node_->children[0].str() + ")^(" +
		       node_->children[1].str() + ")";
	case Kind::Brack:
		return "[" + node_->children[0].str() + "," +
		       node_->children[1].str() + "]";
	}
	throw std::logic_error("bad CommExpr kind");
}

bool ProductSplitCertificate::replay() const {
	Word lhs2 = brack(x, mul(y, z));
	Word rhs2;
	for (const ConjFactor &f : second_slot)
		rhs2 = mul(rhs2, f.value());
	Word lhs1 = brack(mul(x, z), y);
	Word rhs1;
	for (const ConjFactor &f : first_slot)
		rhs1 = mul(rhs1, f.value());
	return lhs2 == rhs2 && lhs1 == rhs1;
}

ProductSplitCertificate split_product_identities(const Word &x, const Word &y,
                                                 const Word &z) {
	ProductSplitCertificate cert;
	cert.x = x;
	cert.y = y;
	cert.z = z;
	// [x, yz] = [x,z] . [x,y]^z
	cert.second_slot = {ConjFactor{brack(x, z), Word{}},
	                    ConjFactor{brack(x, y), z}};
	// [xz, y] = [x,y]^z . [z,y]
	cert.first_slot = {ConjFactor{brack(x, y), z},
	                   ConjFactor{brack(z, y), Word{}}};
	if (z.empty()) {
		cert.second_slot = {ConjFactor{brack(x, y), Word{}}};
		cert.first_slot = {ConjFactor{brack(x, y), Word{}}};
	}
	return cert;
}

CommExpr word_expr(const Word &w) {
	std::vector<CommExpr> leaves;
	leaves.reserve(w.size());
	for (const Letter &l : w.letters()) {
		CommExpr g = CommExpr::gen(Generator{l.gen});
		leaves.push_back(l.sign > 0 ? g : CommExpr::inverse(g));
	}
	return CommExpr::prod(std::move(leaves));
}

std::optional<std::pair<Word, Word>> split_commutator(const Word &w) {
	const size_t n = w.size();
	if (n < 4 || n % 2 != 0)
		return std::nullopt;
	const auto &ls = w.letters();
	auto piece = [&](size_t from, size_t count) {
		return Word::reduce(std::span<const Letter>(ls.data() + from, count));
	};
	// Reduction-free layout u^-1 v^-1 u v first.
	for (size_t a = 1; a < n / 2; ++a) {
		size_t b = n / 2 - a;
		Word u = inv(piece(0, a));
		Word v = inv(piece(a, b));
		if (brack(u, v) == w)
			return std::make_pair(u, v);
	}
	if (n > 64)
		return std::nullopt;
	for (size_t i = 1; i + 2 < n; ++i) {
		for (size_t j = i + 1; j + 1 < n; ++j) {
			Word u = inv(piece(0, i));
			Word v = inv(piece(i, j - i));
			if (u.empty() || v.empty())
				continue;
			if (brack(u, v) == w)
				return std::make_pair(u, v);
		}
	}
	return std::nullopt;
}

CommExpr commutator_shape(const Word &w) {
	if (w.size() == 1 && w.letters()[0].sign > 0)
		return CommExpr::gen(Generator{w.letters()[0].gen});
	if (auto s = split_commutator(w))
		return CommExpr::bracket(commutator_shape(s->first),
		                         commutator_shape(s->second));
	return word_expr(w);
}

namespace {

Word slice(std::span<const Letter> ls, size_t from, size_t count) {
	return Word::reduce(ls.subspan(from, count));
}

// Length of the longest proper prefix cancelling the matching suffix, so that
// w = c^-1 u c with |c| = the returned value.
size_t conj_peel(std::span<const Letter> ls) {
	const size_t n = ls.size();
	size_t k = 0;
	while (2 * (k + 1) < n && ls[k].gen == ls[n - 1 - k].gen &&
	       ls[k].sign == -ls[n - 1 - k].sign)
		++k;
	return k;
}

// Interior positions where every running exponent sum is back to zero; any
// boundary inside a product of conjugated brackets is such a position.
std::vector<size_t> zero_cuts(std::span<const Letter> ls) {
	std::map<uint32_t, int> run;
	std::vector<size_t> cuts;
	for (size_t i = 0; i + 1 < ls.size(); ++i) {
		auto [it, fresh] = run.try_emplace(ls[i].gen, 0);
		it->second += ls[i].sign;
		if (it->second == 0)
			run.erase(it);
		if (run.empty())
			cuts.push_back(i + 1);
	}
	return cuts;
}

bool bracket_like(const Word &w) {
	if (split_commutator(w))
		return true;
	size_t k = conj_peel(w.letters());
	return k > 0 &&
	       split_commutator(slice(w.letters(), k, w.size() - 2 * k)).has_value();
}

} // namespace

CommExpr structure_expr(const Word &w) {
	const auto &ls = w.letters();
	const size_t n = ls.size();
	if (n <= 6)
		return word_expr(w);
	if (auto s = split_commutator(w))
		return CommExpr::bracket(structure_expr(s->first),
		                         structure_expr(s->second));
	if (size_t k = conj_peel(ls)) {
		Word mid = slice(ls, k, n - 2 * k);
		Word c = slice(ls, n - k, k);
		return CommExpr::conjugate(structure_expr(mid), structure_expr(c));
	}
	std::vector<size_t> cuts = zero_cuts(ls);
	if (!cuts.empty()) {
		cuts.push_back(n);
		// Greedily grow each part to the nearest cut where it reads as a
		// (possibly conjugated) bracket; leftovers go to the final part.
		std::vector<Word> parts;
		size_t start = 0, j = 0;
		while (start < n) {
			size_t pick = n;
			for (size_t j2 = j; j2 < cuts.size(); ++j2) {
				if (bracket_like(slice(ls, start, cuts[j2] - start))) {
					pick = cuts[j2];
					break;
				}
			}
			parts.push_back(slice(ls, start, pick - start));
			start = pick;
			while (j < cuts.size() && cuts[j] <= start)
				++j;
		}
		if (parts.size() == 1) {
			// Nothing merged into a bracket; fall back to the minimal blocks
			// so the recursion still shrinks.
			parts.clear();
			size_t from = 0;
			for (size_t cut : cuts) {
				parts.push_back(slice(ls, from, cut - from));
				from = cut;
			}
		}
		std::vector<CommExpr> es;
		es.reserve(parts.size());
		for (const Word &part : parts)
			es.push_back(structure_expr(part));
		return CommExpr::prod(std::move(es));
	}
	return word_expr(w);
}

} // namespace linkhom
