// linkhom: builds link presentations, expands longitudes through filtered
// rings, and runs the verification suites. Exit codes: 0 success, 1 failed
// check/verify, 2 bad input.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "linkhom/engel.hpp"
#include "linkhom/json_io.hpp"
#include "linkhom/links.hpp"
#include "linkhom/milnor.hpp"
#include "linkhom/pipeline.hpp"
#include "linkhom/wordgrammar.hpp"

using namespace linkhom;
using nlohmann::json;

namespace {

struct InputError : std::runtime_error {
	using std::runtime_error::runtime_error;
};

bool g_json = false;

json read_json_file(const std::string &path) {
	std::ifstream in(path);
	if (!in)
		throw InputError("cannot open " + path);
	json j;
	try {
		in >> j;
	} catch (const json::exception &e) {
		throw InputError(path + ": " + e.what());
	}
	return j;
}

// --- policies ---------------------------------------------------------------

std::optional<int> opt_int(const json &j, const char *key) {
	if (!j.contains(key) || j.at(key).is_null())
		return std::nullopt;
	return j.at(key).get<int>();
}

// {"default_cap": int|null, "exceptions": {"name": int|null},
//  "doubled_budget": int|null, "global_degree_cap": int|null}
RepeatPolicy policy_from_json(const json &j) {
	RepeatPolicy p;
	p.default_cap = j.contains("default_cap") ? opt_int(j, "default_cap")
	                                          : std::optional<int>{1};
	p.doubled_budget = opt_int(j, "doubled_budget");
	p.global_degree_cap = opt_int(j, "global_degree_cap");
	if (j.contains("exceptions"))
		for (const auto &[name, cap] : j.at("exceptions").items())
			p.exceptions[generator_named(name).id] =
			    cap.is_null() ? std::nullopt
			                  : std::optional<int>{cap.get<int>()};
	return p;
}

RepeatPolicy load_policy(const std::string &spec) {
	if (spec == "norepeat")
		return RepeatPolicy::no_repeat();
	if (spec == "plus")
		return RepeatPolicy::plus();
	return policy_from_json(read_json_file(spec));
}

std::string default_policy() {
	const char *env = std::getenv("LINKHOM_POLICY");
	return env && *env ? env : "norepeat";
}

// --- shared plumbing --------------------------------------------------------

LinkPresentation load_link(const std::string &arg) {
	if (arg == "hopf")
		return hopf();
	if (arg == "borromean")
		return bing_double(hopf(), 1);
	return link_from_json(read_json_file(arg));
}

std::string mono_names(const LinkPresentation &link, const Monomial &m) {
	std::string out;
	for (uint32_t v : m.vars) {
		std::string name = Generator{v}.display();
		for (const Component &c : link.components)
			if (c.meridian.id == v)
				name = c.name;
		if (!out.empty())
			out += ' ';
		out += name;
	}
	return out;
}

std::string witness_text(const LinkPresentation &link,
                         const HTrivialWitness &w) {
	std::string s = "component " + w.component;
	if (!w.copied.empty())
		s += " (copy of " + w.copied + ")";
	s += ": coefficient " + std::to_string(w.coeff) + " on " +
	     mono_names(link, w.mono);
	return s;
}

GbrNode node_from_json(const json &j) {
	if (j.is_string()) {
		if (j.get<std::string>() != "leaf")
			throw InputError("unknown node: " + j.get<std::string>());
		return GbrNode::leaf();
	}
	if (j.contains("bing")) {
		const json &c = j.at("bing");
		if (!c.is_array() || c.size() != 2)
			throw InputError("bing takes exactly two children");
		return GbrNode::bing(node_from_json(c[0]), node_from_json(c[1]));
	}
	if (j.contains("ramify")) {
		std::vector<GbrNode> kids;
		for (const json &c : j.at("ramify"))
			kids.push_back(node_from_json(c));
		return GbrNode::ramify(std::move(kids));
	}
	throw InputError("node must be \"leaf\", {\"bing\":[..]} or "
	                 "{\"ramify\":[..]}");
}

// {"first": node, "second": node}; node := "leaf" | {"bing":[node,node]}
// | {"ramify":[node,...]}
GbrSpec gbr_from_json(const json &j) {
	GbrSpec spec;
	if (j.contains("first"))
		spec.first = node_from_json(j.at("first"));
	if (j.contains("second"))
		spec.second = node_from_json(j.at("second"));
	return spec;
}

// --- verify suites ----------------------------------------------------------

using Clock = std::chrono::steady_clock;

struct Suite {
	VerifyReport report;
	Clock::time_point start = Clock::now();

	explicit Suite(std::string instance, uint64_t seed) {
		report.instance = std::move(instance);
		report.seed = seed;
	}
	void check(const std::string &name, bool pass, std::string witness = "") {
		report.checks.push_back({name, pass, pass ? "" : std::move(witness)});
	}
	VerifyReport done() {
		report.seconds =
		    std::chrono::duration<double>(Clock::now() - start).count();
		return report;
	}
};

Word random_word(std::mt19937 &rng, int max_len, int num_gens,
                 bool nonempty = false) {
	std::uniform_int_distribution<int> len(nonempty ? 1 : 0, max_len);
	std::uniform_int_distribution<int> pick(1, num_gens);
	std::uniform_int_distribution<int> sign(0, 1);
	for (;;) {
		std::vector<Letter> letters;
		int n = len(rng);
		for (int i = 0; i < n; ++i)
			letters.push_back(
			    Letter{intern_generator("v", pick(rng)).id,
			           static_cast<int8_t>(sign(rng) ? 1 : -1)});
		Word w = Word::reduce(letters);
		if (!nonempty || !w.empty())
			return w;
	}
}

VerifyReport suite_identities(uint64_t seed) {
	Suite s("identities", seed);
	std::mt19937 rng(static_cast<uint32_t>(seed));
	bool replay = true, second = true, first = true, conj_brack = true;
	for (int it = 0; it < 300; ++it) {
		Word x = random_word(rng, 6, 6);
		Word y = random_word(rng, 6, 6);
		Word z = random_word(rng, 6, 6);
		ProductSplitCertificate c = split_product_identities(x, y, z);
		replay &= c.replay();
		Word rhs2;
		for (const ConjFactor &f : c.second_slot)
			rhs2 = mul(rhs2, f.value());
		second &= rhs2 == brack(x, mul(y, z));
		Word rhs1;
		for (const ConjFactor &f : c.first_slot)
			rhs1 = mul(rhs1, f.value());
		first &= rhs1 == brack(mul(x, z), y);
		conj_brack &= conj(brack(x, y), z) == brack(conj(x, z), conj(y, z));
	}
	s.check("certificates replay", replay);
	s.check("second-slot split", second);
	s.check("first-slot split", first);
	s.check("conjugation distributes over brackets", conj_brack);
	return s.done();
}

VerifyReport suite_relators(uint64_t seed) {
	Suite s("relators", seed);
	std::mt19937 rng(static_cast<uint32_t>(seed));
	GeneratorContext ctx;
	for (int i = 1; i <= 5; ++i)
		ctx.meridians.push_back(intern_generator("v", i));
	std::uniform_int_distribution<size_t> pick(0, ctx.meridians.size() - 1);
	RepeatPolicy plus = RepeatPolicy::plus();
	bool milnor = true, engel = true, engel_diag = true;
	for (int it = 0; it < 150; ++it) {
		size_t i = pick(rng), j = pick(rng);
		Word y1 = random_word(rng, 4, 5), z1 = random_word(rng, 4, 5);
		Word y2 = random_word(rng, 4, 5), z2 = random_word(rng, 4, 5);
		milnor &= is_milnor_trivial(milnor_relator(ctx, i, y1), ctx);
		Word r = engel22_relator(ctx, i, y1, z1, j, y2, z2);
		bool ok = expand_word(r, plus).is_one();
		(i == j ? engel_diag : engel) &= ok;
	}
	s.check("milnor relators vanish (no-repeat)", milnor);
	s.check("engel (2,2) relators vanish (plus)", engel);
	s.check("engel (2,2) diagonal relators vanish (plus)", engel_diag);
	return s.done();
}

VerifyReport suite_lemma41(uint64_t seed, int jobs) {
	Suite s("lemma41", seed);
	LinkPresentation good = motivating_example(fig3_pattern(), fig3_pattern());
	auto w = h_trivial_plus_witness(good, jobs);
	s.check("clasped slots give a plus-trivial link", !w,
	        w ? witness_text(good, *w) : "");
	LinkPresentation bad =
	    motivating_example(trivial_pattern(), trivial_pattern());
	s.check("trivial slots fail (negative control)", !is_h_trivial(bad));
	return s.done();
}

void elementary_checks(Suite &s, ElementaryVariant v) {
	LinkPresentation ess = elementary_link(v, ElementaryFlavor::Essential);
	auto w = h_trivial_witness(ess);
	s.check("essential link fails with a degree-4 witness",
	        w && w->mono.degree() == 4 && std::abs(w->coeff) >= 1,
	        w ? witness_text(ess, *w) : "no witness found");

	LinkPresentation ht = elementary_link(v, ElementaryFlavor::HTrivial);
	auto hw = h_trivial_witness(ht);
	s.check("h-trivial counterpart passes", !hw,
	        hw ? witness_text(ht, *hw) : "");
	s.check("parallel copy of y recovers the essential link",
	        !is_h_trivial(parallel_copy(ht, ht.index_of("y"))));

	LinkPresentation pre = elementary_link(v, ElementaryFlavor::Prepended);
	auto split = split_commutator(pre.components[0].longitude);
	bool pre_ok = split && split->first == Word(pre.component("g").meridian);
	if (pre_ok) {
		// the inner slot matches the essential gamma-longitude letter for
		// letter under the name correspondence
		Word gamma = ess.components[0].longitude;
		std::vector<Letter> mapped;
		for (const Letter &l : gamma.letters())
			for (const Component &c : ess.components)
				if (c.meridian.id == l.gen)
					mapped.push_back(
					    Letter{pre.component(c.name).meridian.id, l.sign});
		pre_ok = split->second == Word::reduce(mapped);
	}
	s.check("prepended variant reads [g, gamma]", pre_ok);
}

VerifyReport suite_fig4(uint64_t seed) {
	Suite s("fig4", seed);
	elementary_checks(s, ElementaryVariant::A);
	return s.done();
}

VerifyReport suite_fig6(uint64_t seed) {
	Suite s("fig6", seed);
	elementary_checks(s, ElementaryVariant::B);
	return s.done();
}

VerifyReport suite_slide(uint64_t seed) {
	Suite s("slide", seed);
	LinkPresentation ea =
	    elementary_link(ElementaryVariant::A, ElementaryFlavor::Essential);
	size_t zi = ea.index_of("z");
	LinkPresentation slid = handle_slide(ea, zi, ea.index_of("y"), Word{}, -1);

	s.check("slid component becomes an unknot",
	        slid.components[zi].longitude.empty());
	bool split_off = true;
	for (size_t i = 0; i < slid.components.size(); ++i)
		if (i != zi)
			split_off &= !slid.components[i].longitude.contains(
			    slid.components[zi].meridian);
	s.check("no remaining longitude sees the unknot", split_off);

	LinkPresentation ha =
	    elementary_link(ElementaryVariant::A, ElementaryFlavor::HTrivial);
	bool rings_match = true;
	std::string mismatch;
	for (const Component &hc : ha.components) {
		Series hs = longitude_series(ha, ha.index_of(hc.name));
		Series ss = longitude_series(slid, slid.index_of(hc.name));
		std::vector<Series::Term> mapped;
		for (const auto &t : hs.terms()) {
			Monomial m;
			for (uint32_t var : t.mono.vars)
				for (const Component &oc : ha.components)
					if (oc.meridian.id == var)
						m.vars.push_back(
						    slid.component(oc.name).meridian.id);
			mapped.push_back(Series::Term{std::move(m), t.coeff});
		}
		if (Series::from_terms(std::move(mapped)) != ss) {
			rings_match = false;
			mismatch = "component " + hc.name;
		}
	}
	s.check("remaining components match the h-trivial link in the "
	        "no-repeat ring",
	        rings_match, mismatch);
	return s.done();
}

CommExpr basic_expr(const std::vector<Generator> &gens) {
	std::vector<CommExpr> es;
	for (Generator g : gens)
		es.push_back(CommExpr::gen(g));
	return CommExpr::left_normed(std::move(es));
}

struct HalfInstance {
	CommExpr expr;
	Decomposition dec;
};

HalfInstance random_half(std::mt19937 &rng, std::vector<Generator> gens) {
	std::shuffle(gens.begin(), gens.end(), rng);
	CommExpr e = basic_expr(gens);
	std::sort(gens.begin(), gens.end());
	return {e, decompose_top_degree(e.expand(), gens)};
}

std::string check_W(const Lemma51Result &r, int k) {
	RepeatPolicy plus = RepeatPolicy::plus();
	if (!r.cert.replay())
		return "certificate replay failed";
	if (expand_expr(r.cert.lhs_expr, plus) != expand_expr(r.cert.w_expr, plus))
		return "W differs from [alpha,beta] modulo the (2,2) relators";
	if (lcs_lower_bound(r.cert.w_expr) < 2 * k)
		return "structural lower-central bound below " +
		       std::to_string(2 * k);
	if (lcs_degree(r.cert.w_expr, 2 * k - 1).has_value())
		return "expansion term below degree " + std::to_string(2 * k);
	return "";
}

VerifyReport suite_lemma51(uint64_t seed) {
	Suite s("lemma51", seed);
	std::mt19937 rng(static_cast<uint32_t>(seed));
	std::vector<Generator> c8;
	for (int i = 1; i <= 8; ++i)
		c8.push_back(intern_generator("g", i));
	const int k = 4;
	for (int trial = 0; trial < 20; ++trial) {
		std::vector<Generator> perm = c8;
		std::shuffle(perm.begin(), perm.end(), rng);
		std::vector<Generator> first(perm.begin(), perm.begin() + 4);
		std::vector<Generator> second(perm.begin() + 4, perm.end());
		HalfInstance a = random_half(rng, first);
		HalfInstance b = random_half(rng, second);
		std::string why;
		if (!a.dec.ok || !b.dec.ok)
			why = "decomposition failed";
		else
			why = check_W(lemma51_W(a.expr, b.expr, a.dec, b.dec, k), k);
		s.check("trial " + std::to_string(trial), why.empty(), why);
	}
	return s.done();
}

VerifyReport suite_lemma52(uint64_t seed) {
	Suite s("lemma52", seed);
	std::mt19937 rng(static_cast<uint32_t>(seed));
	std::vector<Generator> c8;
	for (int i = 1; i <= 8; ++i)
		c8.push_back(intern_generator("g", i));
	const int k = 4;
	for (int trial = 0; trial < 3; ++trial) {
		std::vector<Generator> perm = c8;
		std::shuffle(perm.begin(), perm.end(), rng);
		std::vector<Generator> first(perm.begin(), perm.begin() + 4);
		std::vector<Generator> second(perm.begin() + 4, perm.end());
		HalfInstance a1 = random_half(rng, first);
		HalfInstance b1 = random_half(rng, second);
		HalfInstance a2 = random_half(rng, first);
		HalfInstance b2 = random_half(rng, second);
		std::string why;
		if (!(a1.dec.ok && b1.dec.ok && a2.dec.ok && b2.dec.ok)) {
			why = "decomposition failed";
		} else {
			Lemma52Result r = lemma52(a1.expr, b1.expr, a1.dec, b1.dec,
			                          a2.expr, b2.expr, a2.dec, b2.dec, k);
			why = check_W(r.w1, k);
			if (why.empty())
				why = check_W(r.w2, k);
			if (why.empty()) {
				CommExpr lhs = CommExpr::bracket(
				    CommExpr::bracket(a1.expr, b1.expr),
				    CommExpr::bracket(a2.expr, b2.expr));
				CommExpr rhs = CommExpr::bracket(r.w1.cert.w_expr,
				                                 r.w2.cert.w_expr);
				RepeatPolicy plus = RepeatPolicy::plus();
				if (expand_expr(lhs, plus) != expand_expr(rhs, plus))
					why = "[W1,W2] differs from the bracket modulo the "
					      "(2,2) relators";
				else if (lcs_lower_bound(rhs) < 4 * k)
					why = "bracket bound below " + std::to_string(4 * k);
			}
		}
		s.check("trial " + std::to_string(trial), why.empty(), why);
	}
	return s.done();
}

VerifyReport suite_theorem1(uint64_t seed, int factors, int jobs) {
	Suite s("theorem1", seed);
	BuildOptions opts;
	opts.factors_per_torus = factors;
	opts.seed = seed;

	StabilizationPlan plan = build_stabilization(scaled_instance(false), 4,
	                                             opts);
	for (VerifyMode mode : {VerifyMode::LsharpCopies, VerifyMode::K0Plus}) {
		VerifyReport r = verify_theorem1(plan, mode, jobs);
		for (CheckResult &c : r.checks)
			s.report.checks.push_back(
			    {r.mode + ": " + c.name, c.pass, c.witness});
	}

	BuildOptions opts5 = opts;
	opts5.fivefold = true;
	StabilizationPlan plan5 = build_stabilization(scaled_instance(true), 5,
	                                              opts5);
	VerifyReport r5 = verify_theorem1(plan5, VerifyMode::L0Copy, jobs);
	for (CheckResult &c : r5.checks)
		s.report.checks.push_back({r5.mode + ": " + c.name, c.pass, c.witness});

	// negative control: a band conjugator shifted by a meridian class must be
	// caught by the copy test at the band's anchor component
	StabilizationPlan bad = sabotage_band(plan, 3);
	LinkPresentation banded = apply_bands(plan);
	LinkPresentation banded_bad = apply_bands(bad);
	size_t anchor = banded_bad.index_of(plan.bands[3].from);
	auto w = h_trivial_copy_witness(parallel_copy(banded_bad, anchor), banded);
	s.check("sabotaged band is detected",
	        w.has_value() && w->coeff != 0,
	        w ? "" : "no witness found");
	if (w)
		s.report.checks.back().witness =
		    witness_text(banded_bad, *w); // printed even on pass
	return s.done();
}

// --- commands ---------------------------------------------------------------

int cmd_build(const std::vector<std::string> &args) {
	if (args.empty())
		throw InputError("build needs a target");
	const std::string &what = args[0];
	LinkPresentation link;
	if (what == "hopf" && args.size() == 1) {
		link = hopf();
	} else if (what == "borromean" && args.size() == 1) {
		link = bing_double(hopf(), 1);
	} else if (what == "gbr" && args.size() == 2) {
		link = gbr(gbr_from_json(read_json_file(args[1])));
	} else if (what == "engel" && args.size() == 3) {
		ElementaryVariant v;
		if (args[1] == "A" || args[1] == "a")
			v = ElementaryVariant::A;
		else if (args[1] == "B" || args[1] == "b")
			v = ElementaryVariant::B;
		else
			throw InputError("variant must be A or B");
		ElementaryFlavor f;
		if (args[2] == "essential")
			f = ElementaryFlavor::Essential;
		else if (args[2] == "htrivial")
			f = ElementaryFlavor::HTrivial;
		else if (args[2] == "prepended")
			f = ElementaryFlavor::Prepended;
		else
			throw InputError(
			    "flavor must be essential, htrivial or prepended");
		link = elementary_link(v, f);
	} else if (what == "stabilization" && args.size() == 2) {
		LinkPresentation base = gbr(gbr_from_json(read_json_file(args[1])));
		auto split = split_commutator(base.components[0].longitude);
		if (!split)
			throw InputError("component 0 longitude is not a bracket");
		auto left = split_commutator(split->first);
		int k = static_cast<int>(
		    (left ? split->first : base.components[0].longitude)
		        .support()
		        .size());
		try {
			link = apply_bands(build_stabilization(base, k));
		} catch (const std::invalid_argument &e) {
			throw InputError(e.what());
		}
	} else {
		throw InputError("usage: build {hopf|borromean|gbr <spec.json>|"
		                 "engel <A|B> <flavor>|stabilization <gbr.json>}");
	}
	std::cout << link_to_json(link).dump(2) << "\n";
	return 0;
}

int cmd_expand(const std::string &text, const std::string &policy_spec,
               std::optional<int> max_degree) {
	RepeatPolicy p = load_policy(policy_spec);
	if (max_degree) {
		if (!p.global_degree_cap || *p.global_degree_cap > *max_degree)
			p.global_degree_cap = *max_degree;
	}
	CommExpr e = parse_word(text);
	Series s;
	try {
		s = expand_expr(e, p);
	} catch (const std::invalid_argument &err) {
		throw InputError(err.what());
	}
	if (g_json) {
		std::cout << series_to_json(s).dump(2) << "\n";
		return 0;
	}
	for (const auto &t : s.terms()) {
		std::cout << (t.coeff >= 0 ? "+" : "") << t.coeff;
		for (uint32_t v : t.mono.vars)
			std::cout << ' ' << Generator{v}.display();
		std::cout << "\n";
	}
	return 0;
}

int cmd_mu(const std::string &link_arg, const std::string &index) {
	LinkPresentation link = load_link(link_arg);
	auto semi = index.find(';');
	if (semi == std::string::npos)
		throw InputError("--index wants \"i1 i2 ... ; j\" (1-based)");
	std::istringstream front(index.substr(0, semi));
	std::istringstream back(index.substr(semi + 1));
	std::vector<size_t> idx;
	long v = 0;
	while (front >> v) {
		if (v < 1 || static_cast<size_t>(v) > link.components.size())
			throw InputError("index out of range: " + std::to_string(v));
		idx.push_back(static_cast<size_t>(v - 1));
	}
	long j = 0;
	if (!(back >> j) || j < 1 ||
	    static_cast<size_t>(j) > link.components.size())
		throw InputError("bad target component in --index");
	if (idx.empty())
		throw InputError("--index needs at least one source component");
	int64_t value = mu_bar(link, idx, static_cast<size_t>(j - 1));
	if (g_json)
		std::cout << json{{"mu", value}}.dump() << "\n";
	else
		std::cout << value << "\n";
	return 0;
}

int cmd_check(const std::string &link_arg, int which, int jobs) {
	std::optional<HTrivialWitness> w;
	LinkPresentation link;
	if (which == 2) { // --in-torus takes a pattern
		Pattern p = pattern_from_json(read_json_file(link_arg));
		link = p.link;
		w = h_trivial_witness_in_torus(p);
	} else {
		link = load_link(link_arg);
		w = which == 0 ? h_trivial_witness(link)
		               : h_trivial_plus_witness(link, jobs);
	}
	bool pass = !w.has_value();
	if (g_json) {
		json out = {{"pass", pass}};
		if (w)
			out["witness"] = witness_to_json(*w);
		std::cout << out.dump(2) << "\n";
	} else {
		std::cout << (pass ? "true" : "false") << "\n";
		if (w)
			std::cout << witness_text(link, *w) << "\n";
	}
	return pass ? 0 : 1;
}

int cmd_decompose(const std::string &text, int n, bool fivefold) {
	Word target = parse_word(text).expand();
	std::vector<Generator> ctx = target.support();
	std::sort(ctx.begin(), ctx.end(), [](Generator a, Generator b) {
		return a.display() < b.display();
	});
	if (static_cast<int>(ctx.size()) != n)
		throw InputError("word uses " + std::to_string(ctx.size()) +
		                 " generators, --n says " + std::to_string(n));
	Decomposition dec = decompose_top_degree(
	    target, ctx,
	    fivefold ? BasisKind::FirstEntryGenerator : BasisKind::Full);
	std::cout << decomposition_to_json(dec).dump(2) << "\n";
	return dec.ok ? 0 : 1;
}

int cmd_verify(const std::string &suite, uint64_t seed, int factors, int jobs,
               const std::string &out_path) {
	VerifyReport r;
	if (suite == "identities")
		r = suite_identities(seed);
	else if (suite == "relators")
		r = suite_relators(seed);
	else if (suite == "lemma41")
		r = suite_lemma41(seed, jobs);
	else if (suite == "fig4")
		r = suite_fig4(seed);
	else if (suite == "fig6")
		r = suite_fig6(seed);
	else if (suite == "slide")
		r = suite_slide(seed);
	else if (suite == "lemma51")
		r = suite_lemma51(seed);
	else if (suite == "lemma52")
		r = suite_lemma52(seed);
	else if (suite == "theorem1")
		r = suite_theorem1(seed, factors, jobs);
	else
		throw InputError("unknown suite: " + suite);

	json j = report_to_json(r);
	if (!out_path.empty()) {
		std::ofstream out(out_path);
		if (!out)
			throw InputError("cannot write " + out_path);
		out << j.dump(2) << "\n";
	}
	std::cout << j.dump(2) << "\n";
	return r.pass() ? 0 : 1;
}

int fail_input(const std::string &msg) {
	if (g_json)
		std::cerr << json{{"error", msg}}.dump() << "\n";
	else
		std::cerr << "error: " << msg << "\n";
	return 2;
}

} // namespace

int main(int argc, char **argv) {
	CLI::App app{"link homotopy calculus"};
	app.require_subcommand(1);
	app.fallthrough();
	app.add_flag("--json", g_json, "machine-readable errors and output");

	auto *build = app.add_subcommand("build", "construct a link presentation");
	std::vector<std::string> build_args;
	build->add_option("target", build_args,
	                  "hopf | borromean | gbr <spec.json> | engel <A|B> "
	                  "<essential|htrivial|prepended> | stabilization "
	                  "<gbr.json>")
	    ->expected(1, 3);

	auto *expand = app.add_subcommand("expand", "expand a word in a ring");
	std::string word_text, policy_spec = default_policy();
	std::optional<int> max_degree;
	expand->add_option("word", word_text)->required();
	expand->add_option("--policy", policy_spec,
	                   "norepeat | plus | policy.json");
	expand->add_option("--max-degree", max_degree);

	auto *mu = app.add_subcommand("mu", "Magnus coefficient of a longitude");
	std::string mu_link, mu_index;
	mu->add_option("link", mu_link, "link.json | hopf | borromean")
	    ->required();
	mu->add_option("--index", mu_index, "\"i1 i2 ... ; j\" (1-based)")
	    ->required();

	auto *check = app.add_subcommand("check", "homotopy triviality tests");
	std::string check_link;
	int jobs = 1;
	bool f_plain = false, f_plus = false, f_torus = false;
	check->add_option("link", check_link)->required();
	auto *o1 = check->add_flag("--h-trivial", f_plain);
	auto *o2 = check->add_flag("--h-trivial-plus", f_plus);
	auto *o3 = check->add_flag("--in-torus", f_torus);
	o1->excludes(o2)->excludes(o3);
	o2->excludes(o3);
	check->add_option("--jobs", jobs);

	auto *decomp = app.add_subcommand("decompose",
	                                  "almost basic top-degree decomposition");
	std::string decomp_word;
	int decomp_n = 0;
	bool fivefold = false;
	decomp->add_option("word", decomp_word)->required();
	decomp->add_option("--n", decomp_n, "number of generators")->required();
	decomp->add_flag("--fivefold", fivefold,
	                 "restrict the basis to generator-first entries");

	auto *verify = app.add_subcommand("verify", "run a verification suite");
	std::string suite, out_path = "report.json";
	uint64_t seed = 1;
	int factors = 1, vjobs = 1;
	verify->add_option("suite", suite,
	                   "identities | relators | lemma41 | fig4 | fig6 | "
	                   "slide | lemma51 | lemma52 | theorem1")
	    ->required();
	verify->add_option("--seed", seed);
	verify->add_option("--factors", factors,
	                   "product factors per torus (0 = all)");
	verify->add_option("--jobs", vjobs);
	verify->add_option("--out", out_path, "report path (empty to skip)");

	try {
		app.parse(argc, argv);
	} catch (const CLI::CallForHelp &e) {
		return app.exit(e);
	} catch (const CLI::ParseError &e) {
		return fail_input(e.what());
	}

	try {
		if (build->parsed())
			return cmd_build(build_args);
		if (expand->parsed())
			return cmd_expand(word_text, policy_spec, max_degree);
		if (mu->parsed())
			return cmd_mu(mu_link, mu_index);
		if (check->parsed()) {
			if (!f_plain && !f_plus && !f_torus)
				throw InputError("pick one of --h-trivial, "
				                 "--h-trivial-plus, --in-torus");
			return cmd_check(check_link, f_torus ? 2 : (f_plus ? 1 : 0),
			                 jobs);
		}
		if (decomp->parsed())
			return cmd_decompose(decomp_word, decomp_n, fivefold);
		if (verify->parsed())
			return cmd_verify(suite, seed, factors, vjobs, out_path);
	} catch (const ParseError &e) {
		return fail_input(std::string(e.what()) + " at position " +
		                  std::to_string(e.position));
	} catch (const InputError &e) {
		return fail_input(e.what());
	} catch (const std::exception &e) {
		return fail_input(e.what());
	}
	return 2;
}
