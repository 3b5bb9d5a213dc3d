#include "linkhom/pipeline.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <atomic>
#include <chrono>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace linkhom {

LinkPresentation motivating_example(const Pattern &p1, const Pattern &p2) {
	GbrSpec spec;
	spec.second = GbrNode::bing(GbrNode::leaf(), GbrNode::leaf());
	LinkPresentation l = gbr(spec);
	l = satellite(l, 2, p2);
	l = satellite(l, 1, p1);
	return l;
}

// --- geometric realization ---------------------------------------------------

Pattern bracket_pattern(const CommExpr &shape) {
	if (shape.kind() != CommExpr::Kind::Brack)
		return trivial_pattern();
	Pattern base = bing_pattern();
	Pattern left = bracket_pattern(shape.children()[0]);
	Pattern right = bracket_pattern(shape.children()[1]);
	size_t nl = left.link.components.size();
	base = satellite(base, 0, left);
	base = satellite(base, nl, right);
	return base;
}

namespace {

GbrNode chain_node(int k) {
	GbrNode n = GbrNode::leaf();
	for (int i = 1; i < k; ++i)
		n = GbrNode::bing(std::move(n), GbrNode::leaf());
	return n;
}

} // namespace

AlmostBasicRealization almost_basic_pattern(const AlmostBasic &c) {
	if (!c.well_formed())
		throw std::invalid_argument("malformed almost basic commutator");
	const int k = c.length();
	GbrSpec spec;
	spec.second = chain_node(k);
	LinkPresentation l = gbr(spec); // l0 reads the left-normed chain
	l = band_sum(l, 1 + c.p, 1 + c.q);
	AlmostBasicRealization out;
	out.pattern = complement_pattern(l, 0);
	out.slot_component.resize(static_cast<size_t>(k));
	for (size_t s = 0; s < static_cast<size_t>(k); ++s) {
		if (s == c.q)
			out.slot_component[s] = c.p;
		else
			out.slot_component[s] = s < c.q ? s : s - 1;
	}
	out.doubled = c.p;
	return out;
}

// --- stabilization -----------------------------------------------------------

namespace {

struct SlotReal {
	Pattern pattern;
	std::vector<Generator> targets; // per component
	std::optional<size_t> doubled;
	Generator copy_target{};
};

// The basis lists each doubled pair in one order only, while the two orders
// agree at top degree; recover the order that matches the target exactly.
std::optional<AlmostBasic> exact_single(const Decomposition &dec,
                                        const Word &target) {
	if (!dec.ok || dec.terms.size() != 1 || dec.terms[0].exponent != 1 ||
	    !dec.terms[0].conjugator.empty())
		return std::nullopt;
	AlmostBasic b = dec.terms[0].basic;
	if (almost_basic_expand(b) == target)
		return b;
	std::swap(b.a, b.b);
	if (almost_basic_expand(b) == target)
		return b;
	return std::nullopt;
}

bool collect_gen_leaves(const CommExpr &shape, std::vector<Generator> &out) {
	switch (shape.kind()) {
	case CommExpr::Kind::Gen:
		out.push_back(shape.gen_value());
		return true;
	case CommExpr::Kind::Brack:
		return collect_gen_leaves(shape.children()[0], out) &&
		       collect_gen_leaves(shape.children()[1], out);
	default:
		return false;
	}
}

SlotReal realize_basic(const AlmostBasic &basic) {
	AlmostBasicRealization r = almost_basic_pattern(basic);
	SlotReal s;
	s.targets.resize(r.pattern.link.components.size());
	const auto ent = basic.entries();
	for (size_t slot = 0; slot < ent.size(); ++slot) {
		size_t comp = r.slot_component[slot];
		if (slot == basic.q)
			continue;
		if (slot == basic.p) {
			s.targets[comp] = basic.a;
			s.doubled = comp;
			s.copy_target = basic.b;
		} else {
			s.targets[comp] = Generator{ent[slot].letters()[0].gen};
		}
	}
	s.pattern = std::move(r.pattern);
	return s;
}

SlotReal realize_slot(const Word &core,
                      const std::optional<AlmostBasic> &basic) {
	if (basic)
		return realize_basic(*basic);
	CommExpr shape = commutator_shape(core);
	std::vector<Generator> leaves;
	if (collect_gen_leaves(shape, leaves)) {
		SlotReal s;
		s.pattern = bracket_pattern(shape);
		s.targets = std::move(leaves);
		return s;
	}
	// A slot that is itself (exactly) an almost basic expansion.
	Decomposition dec = decompose_top_degree(core, core.support());
	if (auto eb = exact_single(dec, core))
		return realize_basic(*eb);
	throw std::invalid_argument("cannot realize factor slot: " + core.str());
}

} // namespace

StabilizationPlan build_stabilization(const LinkPresentation &base, int k,
                                      const BuildOptions &opts) {
	if (base.components.empty() || base.ambient != Ambient::Sphere)
		throw std::invalid_argument("base must be a nonempty sphere link");
	StabilizationPlan plan;
	plan.base = base;
	plan.k = k;
	plan.fivefold = opts.fivefold;

	auto top = split_commutator(base.components[0].longitude);
	if (!top)
		throw std::invalid_argument(
		    "distinguished longitude is not a bracket of two halves");
	std::array<Word, 2> alpha, beta;
	for (size_t t = 0; t < 2; ++t) {
		const Word &half = t == 0 ? top->first : top->second;
		auto inner = split_commutator(half);
		if (!inner)
			throw std::invalid_argument("half does not split as a bracket");
		alpha[t] = inner->first;
		beta[t] = inner->second;
	}

	const BasisKind kind =
	    opts.fivefold ? BasisKind::FirstEntryGenerator : BasisKind::Full;
	std::array<Decomposition, 2> alpha_dec, beta_dec;
	for (size_t t = 0; t < 2; ++t) {
		alpha_dec[t] = decompose_top_degree(alpha[t], alpha[t].support(), kind);
		beta_dec[t] = decompose_top_degree(beta[t], beta[t].support(), kind);
		if (!alpha_dec[t].ok || !beta_dec[t].ok)
			throw std::invalid_argument("half does not decompose");
	}

	plan.cert = lemma52(commutator_shape(alpha[0]), commutator_shape(beta[0]),
	                    alpha_dec[0], beta_dec[0], commutator_shape(alpha[1]),
	                    commutator_shape(beta[1]), alpha_dec[1], beta_dec[1],
	                    k);

	// Factor selection per torus.
	for (size_t t = 0; t < 2; ++t) {
		const auto &all =
		    (t == 0 ? plan.cert->w1 : plan.cert->w2).cert.factors;
		if (opts.factors_per_torus == 0) {
			for (const BracketFactor &f : all)
				plan.factors.push_back(TorusFactor{f, t, {}, {}});
			continue;
		}
		if (opts.factors_per_torus == 1) {
			if (auto eb = exact_single(alpha_dec[t], alpha[t])) {
				// Direct single-factor form: the left half is literally one
				// almost basic expansion, so [alpha, beta] is itself a factor.
				BracketFactor f;
				f.shape = BracketFactor::Shape::CBeta;
				f.left = alpha[t];
				f.right = beta[t];
				f.left_core = alpha[t];
				f.right_core = beta[t];
				f.left_basic = *eb;
				plan.factors.push_back(TorusFactor{f, t, {}, {}});
				continue;
			}
		}
		int kept = 0;
		for (const BracketFactor &f : all) {
			if (kept >= opts.factors_per_torus)
				break;
			if (f.shape == BracketFactor::Shape::CBeta) {
				plan.factors.push_back(TorusFactor{f, t, {}, {}});
				++kept;
			}
		}
		for (const BracketFactor &f : all) {
			if (kept >= opts.factors_per_torus)
				break;
			if (f.shape != BracketFactor::Shape::CBeta) {
				plan.factors.push_back(TorusFactor{f, t, {}, {}});
				++kept;
			}
		}
	}

	// Realize every slot, then fold the per-torus contents into the
	// stabilizer pattern.
	std::vector<SlotReal> lefts, rights;
	for (const TorusFactor &tf : plan.factors) {
		lefts.push_back(realize_slot(tf.factor.left_core, tf.factor.left_basic));
		rights.push_back(
		    realize_slot(tf.factor.right_core, tf.factor.right_basic));
		plan.constituents.push_back(lefts.back().pattern);
		plan.constituent_basic.push_back(lefts.back().doubled.has_value());
		plan.constituents.push_back(rights.back().pattern);
		plan.constituent_basic.push_back(rights.back().doubled.has_value());
	}

	std::array<Pattern, 2> torus_content;
	// (factor index) -> component index range inside its torus content
	std::vector<std::pair<size_t, size_t>> left_range(plan.factors.size()),
	    right_range(plan.factors.size());
	for (size_t t = 0; t < 2; ++t) {
		std::vector<size_t> idxs;
		for (size_t i = 0; i < plan.factors.size(); ++i)
			if (plan.factors[i].torus == t)
				idxs.push_back(i);
		if (idxs.empty())
			throw std::invalid_argument("a torus received no factors");
		Pattern q = trivial_pattern();
		for (size_t j = 1; j < idxs.size(); ++j)
			q = parallel_copy(q, j - 1);
		size_t offset = 0;
		for (size_t i : idxs) {
			q = satellite(q, offset, bing_pattern());
			q = satellite(q, offset, lefts[i].pattern);
			size_t nl = lefts[i].pattern.link.components.size();
			q = satellite(q, offset + nl, rights[i].pattern);
			size_t nr = rights[i].pattern.link.components.size();
			left_range[i] = {offset, nl};
			right_range[i] = {offset + nl, nr};
			offset += nl + nr;
		}
		torus_content[t] = std::move(q);
	}

	Pattern k0 = bing_pattern();
	size_t n0 = torus_content[0].link.components.size();
	k0 = satellite(k0, 0, torus_content[0]);
	k0 = satellite(k0, n0, torus_content[1]);
	for (size_t i = 0; i < k0.link.components.size(); ++i)
		k0.link.components[i].name = "k" + std::to_string(i);
	plan.k0 = k0;

	auto global_index = [&](size_t factor, bool left_side, size_t local) {
		size_t base_off = plan.factors[factor].torus == 0 ? 0 : n0;
		const auto &rg = left_side ? left_range[factor] : right_range[factor];
		return base_off + rg.first + local;
	};

	// Insert the stabilizer into a meridian circle of the distinguished
	// component.
	LinkPresentation pre = split_union(plan.base, unlink(1));
	size_t mi = pre.components.size() - 1;
	pre.components[mi].name = "M";
	pre.components[mi].longitude = Word(pre.components[0].meridian, -1);
	pre.components[0].longitude =
	    mul(pre.components[0].longitude, Word(pre.components[mi].meridian, -1));
	plan.assembled = satellite(pre, mi, k0);

	auto comp_of = [&](Generator m) -> std::string {
		for (const Component &c : plan.base.components)
			if (c.meridian == m)
				return c.name;
		throw std::logic_error("band target is not a base meridian");
	};

	for (size_t i = 0; i < plan.factors.size(); ++i) {
		TorusFactor &tf = plan.factors[i];
		for (int side = 0; side < 2; ++side) {
			const SlotReal &sr = side == 0 ? lefts[i] : rights[i];
			const Word slot_conj =
			    side == 0 ? tf.factor.left_conj : tf.factor.right_conj;
			const Word band_conj = mul(slot_conj, tf.factor.conjugator);
			auto &names =
			    side == 0 ? tf.left_components : tf.right_components;
			for (size_t local = 0; local < sr.targets.size(); ++local) {
				size_t g = global_index(i, side == 0, local);
				std::string name = plan.assembled.components[mi + g].name;
				names.push_back(name);
				plan.bands.push_back(BandInstruction{
				    comp_of(sr.targets[local]), name, band_conj});
				if (sr.doubled && *sr.doubled == local) {
					plan.copies.push_back(name);
					plan.bands.push_back(BandInstruction{
					    comp_of(sr.copy_target), name + "'", band_conj});
				}
			}
		}
	}
	return plan;
}

LinkPresentation apply_bands(const StabilizationPlan &plan) {
	LinkPresentation l = plan.assembled;
	for (const std::string &name : plan.copies)
		l = parallel_copy(l, l.index_of(name));
	for (const BandInstruction &b : plan.bands)
		l = band_sum(l, l.index_of(b.from), l.index_of(b.to), b.conjugator);
	return l;
}

StabilizationPlan sabotage_band(const StabilizationPlan &plan, size_t band) {
	if (band >= plan.bands.size())
		throw std::invalid_argument("band index out of range");
	StabilizationPlan out = plan;
	BandInstruction &b = out.bands[band];
	Generator shift =
	    plan.base.components[plan.base.index_of(b.from)].meridian;
	b.conjugator = mul(b.conjugator, Word(shift));
	return out;
}

LinkPresentation scaled_instance(bool fivefold) {
	const int k = fivefold ? 4 + 1 : 4;
	GbrSpec spec;
	GbrNode half = GbrNode::bing(GbrNode::leaf(), chain_node(k));
	spec.second = GbrNode::bing(half, half);
	LinkPresentation base = gbr(spec);
	// components: l0; slot A1 at 1; B1 leaves; slot A2 at 2+k; B2 leaves.
	AlmostBasic shape;
	shape.p = fivefold ? 2 : 1;
	shape.q = shape.p + 1;
	shape.a = intern_generator("u", 0);
	shape.b = intern_generator("u", 1);
	for (int i = 0; i < k - 2; ++i)
		shape.rest.push_back(intern_generator("u", 2 + i));
	AlmostBasicRealization r = almost_basic_pattern(shape);
	Pattern ess = parallel_copy(r.pattern, r.doubled);
	std::vector<std::string> names =
	    fivefold ? std::vector<std::string>{"g", "x", "y", "z", "w"}
	             : std::vector<std::string>{"x", "y", "z", "w"};
	for (size_t side : {static_cast<size_t>(2 + k), static_cast<size_t>(1)}) {
		Pattern p = ess;
		for (size_t i = 0; i < p.link.components.size(); ++i)
			p.link.components[i].name =
			    names[i] + (side == 1 ? "1" : "2");
		base = satellite(base, side, p);
	}
	return base;
}

// --- verification ------------------------------------------------------------

bool VerifyReport::pass() const {
	for (const CheckResult &c : checks)
		if (!c.pass)
			return false;
	return true;
}

namespace {

std::string witness_str(const HTrivialWitness &w) {
	std::ostringstream os;
	os << "component " << w.component;
	if (!w.copied.empty())
		os << " (copy of " << w.copied << ")";
	os << ": coeff " << w.coeff << " at";
	for (uint32_t v : w.mono.vars)
		os << ' ' << Generator{v}.display();
	return os.str();
}

CheckResult link_check(const std::string &name, const LinkPresentation &l) {
	CheckResult c{name, true, ""};
	if (auto w = h_trivial_witness(l)) {
		c.pass = false;
		c.witness = witness_str(*w);
	}
	return c;
}

void run_indexed(size_t n, int jobs, const std::function<void(size_t)> &fn) {
	if (jobs <= 1 || n <= 1) {
		for (size_t i = 0; i < n; ++i)
			fn(i);
		return;
	}
	std::atomic<size_t> next{0};
	std::vector<std::thread> pool;
	size_t workers = std::min<size_t>(static_cast<size_t>(jobs), n);
	for (size_t w = 0; w < workers; ++w)
		pool.emplace_back([&] {
			for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
				fn(i);
		});
	for (std::thread &t : pool)
		t.join();
}

} // namespace

VerifyReport verify_theorem1(const StabilizationPlan &plan, VerifyMode mode,
                             int jobs) {
	auto start = std::chrono::steady_clock::now();
	VerifyReport rep;
	{
		std::ostringstream os;
		os << plan.base.components.size() << "-component base, k=" << plan.k
		   << ", factors=" << plan.factors.size();
		rep.instance = os.str();
	}
	switch (mode) {
	case VerifyMode::LsharpCopies: {
		rep.mode = "banded-copies";
		LinkPresentation banded = apply_bands(plan);
		rep.checks.push_back(link_check("banded", banded));
		size_t n = banded.components.size();
		std::vector<CheckResult> per(n);
		run_indexed(n - 1, jobs, [&](size_t i) {
			size_t c = i + 1; // the distinguished component has its own mode
			CheckResult r{"copy:" + banded.components[c].name, true, ""};
			if (auto w = h_trivial_copy_witness(parallel_copy(banded, c),
			                                    banded)) {
				r.pass = false;
				r.witness = witness_str(*w);
			}
			per[c] = std::move(r);
		});
		for (size_t c = 1; c < n; ++c)
			rep.checks.push_back(std::move(per[c]));
		break;
	}
	case VerifyMode::K0Plus: {
		rep.mode = "stabilizer-plus";
		for (size_t i = 0; i < plan.constituents.size(); ++i) {
			if (!plan.constituent_basic[i])
				continue;
			CheckResult c{"constituent:" + std::to_string(i), true, ""};
			if (auto w = h_trivial_witness_in_torus(plan.constituents[i])) {
				c.pass = false;
				c.witness = witness_str(*w);
			}
			rep.checks.push_back(std::move(c));
		}
		CheckResult c{"stabilizer-plus", true, ""};
		if (auto w = h_trivial_plus_witness_in_torus(plan.k0, jobs)) {
			c.pass = false;
			c.witness = witness_str(*w);
		}
		rep.checks.push_back(std::move(c));
		break;
	}
	case VerifyMode::L0Copy: {
		rep.mode = "distinguished-copy";
		CheckResult base_shape{"fivefold-base", plan.fivefold,
		                       plan.fivefold
		                           ? ""
		                           : "plan built without the fivefold form"};
		rep.checks.push_back(std::move(base_shape));
		CheckResult conj{"conjugators-in-subgroup", true, ""};
		const Generator m0 = plan.base.components[0].meridian;
		for (const BandInstruction &b : plan.bands)
			if (b.conjugator.contains(m0)) {
				conj.pass = false;
				conj.witness = "band to " + b.to +
				               " conjugated through the distinguished "
				               "meridian";
			}
		rep.checks.push_back(std::move(conj));
		LinkPresentation banded = apply_bands(plan);
		rep.checks.push_back(link_check("banded", banded));
		CheckResult r{"copy:" + banded.components[0].name, true, ""};
		if (auto w = h_trivial_copy_witness(parallel_copy(banded, 0),
		                                    banded)) {
			r.pass = false;
			r.witness = witness_str(*w);
		}
		rep.checks.push_back(std::move(r));
		break;
	}
	}
	rep.seconds = std::chrono::duration<double>(
	                  std::chrono::steady_clock::now() - start)
	                  .count();
	return rep;
}

// --- relative slice export ---------------------------------------------------

RelSliceProblem export_relative_slice(const LinkPresentation &banded,
                                      const StabilizationPlan &plan) {
	RelSliceProblem out;
	out.j_side = banded;

	std::vector<std::string> handle_names;
	for (const TorusFactor &tf : plan.factors) {
		for (const std::string &n : tf.left_components)
			handle_names.push_back(n);
		for (const std::string &n : tf.right_components)
			handle_names.push_back(n);
	}
	LinkPresentation k = plan.assembled;
	for (size_t i = k.components.size(); i-- > 0;) {
		const std::string &n = k.components[i].name;
		if (std::find(handle_names.begin(), handle_names.end(), n) ==
		    handle_names.end())
			k = delete_component(k, i);
	}
	out.k_side = std::move(k);

	out.ownership[banded.components[0].name] = "ambient";
	for (size_t i = 1; i < banded.components.size(); ++i)
		out.ownership[banded.components[i].name] = "banded";
	for (const Component &c : out.k_side.components)
		out.ownership[c.name] = "handle";
	return out;
}

} // namespace linkhom
