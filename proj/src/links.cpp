#include "linkhom/links.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace linkhom {

namespace {
std::atomic<int> fresh_index{0};
} // namespace

Generator fresh_meridian() {
	return intern_generator("m", fresh_index.fetch_add(1), GenRole::Meridian);
}

namespace {

bool name_taken(const LinkPresentation &l, const std::string &name) {
	for (const Component &c : l.components)
		if (c.name == name)
			return true;
	return false;
}

std::string unique_name(const LinkPresentation &l, std::string base) {
	while (name_taken(l, base))
		base += "'";
	return base;
}

void check_index(const LinkPresentation &l, size_t i) {
	if (i >= l.components.size())
		throw std::invalid_argument("component index out of range");
}

} // namespace

Generator lambda_symbol() {
	return intern_generator("Lambda", -1, GenRole::Lambda);
}

size_t LinkPresentation::index_of(const std::string &name) const {
	for (size_t i = 0; i < components.size(); ++i)
		if (components[i].name == name)
			return i;
	throw std::invalid_argument("no component named " + name);
}

const Component &LinkPresentation::component(const std::string &name) const {
	return components[index_of(name)];
}

int LinkPresentation::lk(size_t i, size_t j) const {
	check_index(*this, i);
	check_index(*this, j);
	if (i == j)
		throw std::invalid_argument("self-linking is not defined");
	return components[i].longitude.exponent_sum(components[j].meridian);
}

bool LinkPresentation::linking_symmetric() const {
	for (size_t i = 0; i < components.size(); ++i)
		for (size_t j = i + 1; j < components.size(); ++j)
			if (lk(i, j) != lk(j, i))
				return false;
	return true;
}

std::vector<Generator> LinkPresentation::meridians() const {
	std::vector<Generator> out;
	out.reserve(components.size());
	for (const Component &c : components)
		out.push_back(c.meridian);
	return out;
}

bool Pattern::winding_zero() const {
	for (const Component &c : link.components)
		if (meridian_class.exponent_sum(c.meridian) != 0)
			return false;
	return true;
}

// --- constructors -----------------------------------------------------------

LinkPresentation hopf() {
	LinkPresentation l;
	Component a{"1", fresh_meridian(), 0, Word{}};
	Component b{"2", fresh_meridian(), 0, Word{}};
	a.longitude = Word(b.meridian);
	b.longitude = Word(a.meridian);
	l.components = {a, b};
	return l;
}

LinkPresentation unlink(int n) {
	if (n < 0)
		throw std::invalid_argument("negative component count");
	LinkPresentation l;
	for (int i = 1; i <= n; ++i)
		l.components.push_back(
		    Component{std::to_string(i), fresh_meridian(), 0, Word{}});
	return l;
}

Pattern trivial_pattern() {
	Pattern p;
	p.link.ambient = Ambient::SolidTorus;
	Component core{"c", fresh_meridian(), 0, Word(lambda_symbol())};
	p.link.components = {core};
	p.meridian_class = Word(core.meridian);
	return p;
}

Pattern bing_pattern() {
	Pattern p;
	p.link.ambient = Ambient::SolidTorus;
	Component a{"a", fresh_meridian(), 0, Word{}};
	Component b{"b", fresh_meridian(), 0, Word{}};
	Word lam(lambda_symbol());
	a.longitude = brack(Word(b.meridian), lam);
	b.longitude = brack(lam, Word(a.meridian));
	p.link.components = {a, b};
	p.meridian_class = brack(Word(a.meridian), Word(b.meridian));
	return p;
}

Pattern whitehead_pattern() {
	Pattern p = band_sum(bing_pattern(), 0, 1, Word(lambda_symbol()));
	p.link.components[0].name = "w";
	return p;
}

Pattern fig3_pattern() { return parallel_copy(whitehead_pattern(), 0); }

GbrNode GbrNode::bing(GbrNode a, GbrNode b) {
	GbrNode n;
	n.kind = Kind::Bing;
	n.children = {std::move(a), std::move(b)};
	return n;
}

GbrNode GbrNode::ramify(std::vector<GbrNode> children) {
	GbrNode n;
	n.kind = Kind::Ramify;
	n.children = std::move(children);
	return n;
}

bool GbrNode::well_formed() const {
	switch (kind) {
	case Kind::Leaf:
		return children.empty();
	case Kind::Bing:
		return children.size() == 2 && children[0].well_formed() &&
		       children[1].well_formed();
	case Kind::Ramify:
		if (children.empty())
			return false;
		for (const GbrNode &c : children)
			if (!c.well_formed())
				return false;
		return true;
	}
	return false;
}

namespace {

// Applies the node at component i; returns how many components it becomes.
size_t apply_gbr_node(LinkPresentation &l, size_t i, const GbrNode &n) {
	switch (n.kind) {
	case GbrNode::Kind::Leaf:
		return 1;
	case GbrNode::Kind::Bing: {
		l = bing_double(l, i);
		size_t a = apply_gbr_node(l, i, n.children[0]);
		size_t b = apply_gbr_node(l, i + a, n.children[1]);
		return a + b;
	}
	case GbrNode::Kind::Ramify: {
		l = ramify(l, i, static_cast<int>(n.children.size()));
		size_t total = 0;
		for (const GbrNode &c : n.children)
			total += apply_gbr_node(l, i + total, c);
		return total;
	}
	}
	return 0;
}

} // namespace

LinkPresentation gbr(const GbrSpec &spec) {
	if (!spec.first.well_formed() || !spec.second.well_formed())
		throw std::invalid_argument("malformed GBR tree");
	LinkPresentation l = hopf();
	size_t a = apply_gbr_node(l, 0, spec.first);
	apply_gbr_node(l, a, spec.second);
	for (size_t i = 0; i < l.components.size(); ++i)
		l.components[i].name = "l" + std::to_string(i);
	return l;
}

// --- satellite-type operators ----------------------------------------------

LinkPresentation satellite(const LinkPresentation &link, size_t i,
                           const Pattern &pattern, const Word &c) {
	check_index(link, i);
	if (pattern.link.ambient != Ambient::SolidTorus)
		throw std::invalid_argument("pattern must live in a solid torus");

	const Word li_c = conj(link.components[i].longitude, c);
	const Generator mi = link.components[i].meridian;

	// Clone the pattern onto fresh meridians, then read Lambda as (l_i)^c.
	std::vector<Component> inserted;
	std::vector<std::pair<Generator, Generator>> remap;
	LinkPresentation scratch = link;
	scratch.components.erase(scratch.components.begin() + i);
	for (const Component &pc : pattern.link.components) {
		Component nc = pc;
		nc.meridian = fresh_meridian();
		nc.name = unique_name(scratch, pc.name);
		scratch.components.push_back(nc);
		remap.emplace_back(pc.meridian, nc.meridian);
		inserted.push_back(nc);
	}
	auto reroot = [&](Word w) {
		for (const auto &[from, to] : remap)
			w = substitute(w, from, Word(to));
		return substitute(w, lambda_symbol(), li_c);
	};
	for (Component &nc : inserted)
		nc.longitude = reroot(nc.longitude);
	const Word mu = reroot(pattern.meridian_class);
	const Word mi_repl = mul(mul(c, mu), inv(c));

	LinkPresentation out;
	out.ambient = link.ambient;
	for (size_t k = 0; k < link.components.size(); ++k) {
		if (k == i) {
			for (Component &nc : inserted)
				out.components.push_back(std::move(nc));
			continue;
		}
		Component ck = link.components[k];
		ck.longitude = substitute(ck.longitude, mi, mi_repl);
		out.components.push_back(std::move(ck));
	}
	return out;
}

Pattern satellite(const Pattern &base, size_t i, const Pattern &pattern,
                  const Word &c) {
	check_index(base.link, i);
	const Generator mi = base.link.components[i].meridian;
	const Word li_c = conj(base.link.components[i].longitude, c);
	Pattern out;
	out.link = satellite(base.link, i, pattern, c);
	Word mu = pattern.meridian_class;
	// The result components at positions i.. carry the fresh meridians in
	// pattern order.
	for (size_t k = 0; k < pattern.link.components.size(); ++k)
		mu = substitute(mu, pattern.link.components[k].meridian,
		                Word(out.link.components[i + k].meridian));
	mu = substitute(mu, lambda_symbol(), li_c);
	out.meridian_class =
	    substitute(base.meridian_class, mi, mul(mul(c, mu), inv(c)));
	return out;
}

LinkPresentation bing_double(const LinkPresentation &link, size_t i) {
	return satellite(link, i, bing_pattern());
}

Pattern bing_double(const Pattern &base, size_t i) {
	return satellite(base, i, bing_pattern());
}

LinkPresentation ramify(const LinkPresentation &link, size_t i, int r) {
	check_index(link, i);
	if (r < 1)
		throw std::invalid_argument("ramification index must be positive");
	LinkPresentation out = link;
	for (int k = 1; k < r; ++k)
		out = parallel_copy(out, i);
	return out;
}

LinkPresentation parallel_copy(const LinkPresentation &link, size_t i) {
	check_index(link, i);
	const Generator mi = link.components[i].meridian;
	Component copy{unique_name(link, link.components[i].name + "'"),
	               fresh_meridian(), 0, Word{}};
	const Word repl = mul(Word(mi), Word(copy.meridian));

	LinkPresentation out = link;
	for (Component &c : out.components)
		c.longitude = substitute(c.longitude, mi, repl);
	copy.longitude = out.components[i].longitude;
	out.components.insert(out.components.begin() + i + 1, std::move(copy));
	return out;
}

Pattern parallel_copy(const Pattern &base, size_t i) {
	const Generator mi = base.link.components[i].meridian;
	Pattern out;
	out.link = parallel_copy(base.link, i);
	out.meridian_class =
	    substitute(base.meridian_class, mi,
	               mul(Word(mi), Word(out.link.components[i + 1].meridian)));
	return out;
}

LinkPresentation delete_component(const LinkPresentation &link, size_t i) {
	check_index(link, i);
	const Generator mi = link.components[i].meridian;
	LinkPresentation out;
	out.ambient = link.ambient;
	for (size_t k = 0; k < link.components.size(); ++k) {
		if (k == i)
			continue;
		Component c = link.components[k];
		c.longitude = substitute(c.longitude, mi, Word{});
		out.components.push_back(std::move(c));
	}
	return out;
}

LinkPresentation band_sum(const LinkPresentation &link, size_t i, size_t j,
                          const Word &c) {
	check_index(link, i);
	check_index(link, j);
	if (i == j)
		throw std::invalid_argument("band sum needs distinct components");
	const Generator mi = link.components[i].meridian;
	const Generator mj = link.components[j].meridian;
	const Word repl = conj(Word(mi), c);

	LinkPresentation out;
	out.ambient = link.ambient;
	for (size_t k = 0; k < link.components.size(); ++k) {
		if (k == j)
			continue;
		Component ck = link.components[k];
		if (k == i)
			ck.longitude = mul(ck.longitude,
			                   mul(c, mul(link.components[j].longitude, inv(c))));
		ck.longitude = substitute(ck.longitude, mj, repl);
		out.components.push_back(std::move(ck));
	}
	return out;
}

Pattern band_sum(const Pattern &base, size_t i, size_t j, const Word &c) {
	const Generator mi = base.link.components[i].meridian;
	const Generator mj = base.link.components[j].meridian;
	Pattern out;
	out.link = band_sum(base.link, i, j, c);
	out.meridian_class =
	    substitute(base.meridian_class, mj, conj(Word(mi), c));
	return out;
}

LinkPresentation handle_slide(const LinkPresentation &link, size_t i, size_t j,
                              const Word &c, int sign) {
	check_index(link, i);
	check_index(link, j);
	if (i == j)
		throw std::invalid_argument("cannot slide a component over itself");
	if (sign != 1 && sign != -1)
		throw std::invalid_argument("slide sign must be +1 or -1");
	const Generator mi = link.components[i].meridian;
	const Generator mj = link.components[j].meridian;
	Word lj = link.components[j].longitude;
	if (sign < 0)
		lj = inv(lj);
	// m_j -> m_j . c^-1 m_i^{sign} c in every longitude.
	const Word repl = mul(Word(mj), conj(Word(mi, sign), c));

	LinkPresentation out = link;
	out.components[i].longitude =
	    mul(out.components[i].longitude, mul(c, mul(lj, inv(c))));
	for (Component &ck : out.components)
		ck.longitude = substitute(ck.longitude, mj, repl);
	return out;
}

LinkPresentation with_meridian(const Pattern &pattern) {
	if (pattern.link.ambient != Ambient::SolidTorus)
		throw std::invalid_argument("pattern must live in a solid torus");
	LinkPresentation out = pattern.link;
	out.ambient = Ambient::Sphere;
	Component lam{unique_name(out, "Lambda"), fresh_meridian(), 0,
	              pattern.meridian_class};
	for (Component &c : out.components)
		c.longitude = substitute(c.longitude, lambda_symbol(),
		                         Word(lam.meridian));
	lam.longitude = substitute(lam.longitude, lambda_symbol(),
	                           Word(lam.meridian));
	out.components.push_back(std::move(lam));
	return out;
}

Pattern complement_pattern(const LinkPresentation &link, size_t i) {
	check_index(link, i);
	if (link.ambient != Ambient::Sphere)
		throw std::invalid_argument("complement pattern needs a sphere link");
	const Component &host = link.components[i];
	Pattern out;
	out.link.ambient = Ambient::SolidTorus;
	for (size_t k = 0; k < link.components.size(); ++k) {
		if (k == i)
			continue;
		Component c = link.components[k];
		c.longitude = substitute(c.longitude, host.meridian,
		                         Word(lambda_symbol()));
		out.link.components.push_back(std::move(c));
	}
	// The host meridian is the companion longitude of the complementary torus.
	out.meridian_class =
	    substitute(host.longitude, host.meridian, Word(lambda_symbol()));
	return out;
}

LinkPresentation embed_standard(const Pattern &pattern) {
	if (pattern.link.ambient != Ambient::SolidTorus)
		throw std::invalid_argument("pattern must live in a solid torus");
	LinkPresentation out = pattern.link;
	out.ambient = Ambient::Sphere;
	for (Component &c : out.components)
		c.longitude = substitute(c.longitude, lambda_symbol(), Word{});
	return out;
}

LinkPresentation split_union(const LinkPresentation &a,
                             const LinkPresentation &b) {
	if (a.ambient != Ambient::Sphere || b.ambient != Ambient::Sphere)
		throw std::invalid_argument("split union is for sphere links");
	LinkPresentation out = a;
	for (const Component &c : b.components) {
		Component nc = c;
		nc.name = unique_name(out, c.name);
		out.components.push_back(std::move(nc));
	}
	return out;
}

// --- invariants -------------------------------------------------------------

int torus_degree_cap(const LinkPresentation &link) {
	return static_cast<int>(link.components.size()) + 4;
}

namespace {

// Cache key: the word text plus the policy restricted to the word's support.
// Two lookups with different policies share an entry whenever the policies
// agree on every variable the word mentions, which is what makes the cache
// hit across components (different own-meridian projections) and across
// parallel-copy variants (unchanged factors).
std::string support_policy_key(const Word &w, const RepeatPolicy &p) {
	std::set<uint32_t> sup;
	for (const Letter &l : w.letters())
		sup.insert(l.gen);
	std::string key;
	for (uint32_t v : sup) {
		key += std::to_string(v);
		key += '=';
		auto c = p.cap(v);
		key += c ? std::to_string(*c) : std::string("u");
		key += ';';
	}
	if (p.doubled_budget)
		key += "d" + std::to_string(*p.doubled_budget);
	if (p.global_degree_cap)
		key += "g" + std::to_string(*p.global_degree_cap);
	return key;
}

std::mutex g_longitude_cache_mutex;
std::unordered_map<std::string, Series> g_longitude_cache;
constexpr size_t kLongitudeCacheMax = 1 << 16;

std::optional<Series> cache_get(const std::string &key) {
	std::lock_guard<std::mutex> lock(g_longitude_cache_mutex);
	auto it = g_longitude_cache.find(key);
	if (it == g_longitude_cache.end())
		return std::nullopt;
	return it->second;
}

void cache_put(const std::string &key, const Series &s) {
	std::lock_guard<std::mutex> lock(g_longitude_cache_mutex);
	if (g_longitude_cache.size() < kLongitudeCacheMax)
		g_longitude_cache.emplace(key, s);
}

Series expand_factor_cached(const CommExpr &e, const RepeatPolicy &p) {
	Word w = e.expand();
	std::string key = w.str();
	key += '|';
	key += support_policy_key(w, p);
	if (auto hit = cache_get(key))
		return *hit;
	Series s = expand_expr(e, p);
	cache_put(key, s);
	return s;
}

// Longitudes in the stabilization pipeline are long products of conjugated
// brackets drawn from a small factor set, so each factor series is cached and
// the product is folded balanced.
Series expand_longitude(const Word &w, const RepeatPolicy &p) {
	if (w.size() <= 64)
		return expand_word(w, p);
	std::string key = w.str();
	key += '|';
	key += support_policy_key(w, p);
	if (auto hit = cache_get(key))
		return *hit;
	CommExpr e = structure_expr(w);
	Series s;
	if (e.kind() == CommExpr::Kind::Prod) {
		const auto &kids = e.children();
		std::function<Series(size_t, size_t)> fold =
		    [&](size_t lo, size_t hi) -> Series {
			if (lo == hi)
				return Series::one();
			if (hi - lo == 1)
				return expand_factor_cached(kids[lo], p);
			size_t mid = lo + (hi - lo) / 2;
			return series_mul(fold(lo, mid), fold(mid, hi), p);
		};
		s = fold(0, kids.size());
	} else {
		s = expand_expr(e, p);
	}
	cache_put(key, s);
	return s;
}

} // namespace

Series longitude_series(const LinkPresentation &link, size_t i) {
	check_index(link, i);
	RepeatPolicy p = RepeatPolicy::no_repeat();
	// Own-meridian occurrences only record self-conjugation; project them out.
	p.exceptions[link.components[i].meridian.id] = 0;
	if (link.ambient == Ambient::SolidTorus) {
		p.exceptions[lambda_symbol().id] = std::nullopt;
		p.global_degree_cap = torus_degree_cap(link);
	}
	return expand_longitude(link.components[i].longitude, p);
}

namespace {

std::optional<HTrivialWitness> witness_of(const LinkPresentation &link) {
	for (size_t i = 0; i < link.components.size(); ++i) {
		Series s = longitude_series(link, i);
		for (const auto &t : s.terms()) {
			if (t.mono.vars.empty())
				continue;
			return HTrivialWitness{link.components[i].name, "", t.mono,
			                       t.coeff};
		}
	}
	return std::nullopt;
}

} // namespace

std::optional<HTrivialWitness>
h_trivial_copy_witness(const LinkPresentation &copied,
                       const LinkPresentation &base) {
	if (copied.ambient != Ambient::Sphere || base.ambient != Ambient::Sphere)
		throw std::invalid_argument("copy witness shortcut is sphere-only");
	for (size_t i = 0; i < copied.components.size(); ++i) {
		// A copy only rewrites longitudes that mention the copied meridian;
		// a word identical to the verified base expands identically.
		if (i < base.components.size() &&
		    copied.components[i].longitude == base.components[i].longitude)
			continue;
		Series s = longitude_series(copied, i);
		for (const auto &t : s.terms()) {
			if (t.mono.vars.empty())
				continue;
			return HTrivialWitness{copied.components[i].name, "", t.mono,
			                       t.coeff};
		}
	}
	return std::nullopt;
}

namespace {

// One copied link per component; earliest failing component wins, so the
// result does not depend on `jobs`.
std::optional<HTrivialWitness>
plus_witness(const LinkPresentation &link,
             const std::optional<Pattern> &as_pattern, int jobs) {
	size_t n = link.components.size();
	std::vector<std::optional<HTrivialWitness>> results(n);
	auto run = [&](size_t i) {
		std::optional<HTrivialWitness> w;
		if (as_pattern) {
			// The torus degree cap grows with the component count, so the
			// unchanged-longitude shortcut does not apply here.
			w = witness_of(parallel_copy(*as_pattern, i).link);
		} else {
			w = h_trivial_copy_witness(parallel_copy(link, i), link);
		}
		if (w)
			w->copied = link.components[i].name;
		results[i] = w;
	};
	if (jobs <= 1 || n <= 1) {
		for (size_t i = 0; i < n; ++i)
			run(i);
	} else {
		std::atomic<size_t> next{0};
		std::vector<std::thread> pool;
		size_t workers = std::min<size_t>(static_cast<size_t>(jobs), n);
		for (size_t w = 0; w < workers; ++w)
			pool.emplace_back([&] {
				for (size_t i = next.fetch_add(1); i < n;
				     i = next.fetch_add(1))
					run(i);
			});
		for (std::thread &t : pool)
			t.join();
	}
	for (auto &r : results)
		if (r)
			return r;
	return std::nullopt;
}

} // namespace

std::optional<HTrivialWitness> h_trivial_witness(const LinkPresentation &link) {
	return witness_of(link);
}

bool is_h_trivial(const LinkPresentation &link) {
	return !h_trivial_witness(link).has_value();
}

std::optional<HTrivialWitness> h_trivial_witness_in_torus(const Pattern &p) {
	return witness_of(p.link);
}

bool is_h_trivial_in_torus(const Pattern &p) {
	return !h_trivial_witness_in_torus(p).has_value();
}

std::optional<HTrivialWitness>
h_trivial_plus_witness(const LinkPresentation &link, int jobs) {
	if (auto w = witness_of(link))
		return w;
	return plus_witness(link, std::nullopt, jobs);
}

bool is_h_trivial_plus(const LinkPresentation &link, int jobs) {
	return !h_trivial_plus_witness(link, jobs).has_value();
}

std::optional<HTrivialWitness> h_trivial_plus_witness_in_torus(const Pattern &p,
                                                               int jobs) {
	if (auto w = witness_of(p.link))
		return w;
	return plus_witness(p.link, p, jobs);
}

bool is_h_trivial_plus_in_torus(const Pattern &p, int jobs) {
	return !h_trivial_plus_witness_in_torus(p, jobs).has_value();
}

int64_t mu_bar(const LinkPresentation &link, const std::vector<size_t> &idx,
               size_t j) {
	check_index(link, j);
	Monomial m;
	for (size_t i : idx) {
		check_index(link, i);
		m.vars.push_back(link.components[i].meridian.id);
	}
	return coefficient(link.components[j].longitude, m);
}

} // namespace linkhom
