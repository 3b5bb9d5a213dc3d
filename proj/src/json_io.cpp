#include "linkhom/json_io.hpp"

#include <cctype>
#include <map>
#include <set>
#include <stdexcept>

#include "linkhom/wordgrammar.hpp"

namespace linkhom {

using nlohmann::json;

namespace {

std::string word_text(const Word &w,
                      const std::map<uint32_t, std::string> &names) {
	if (w.empty())
		return "1";
	std::string out;
	for (const Letter &l : w.letters()) {
		auto it = names.find(l.gen);
		if (it == names.end())
			throw std::invalid_argument(
			    "longitude mentions a generator with no component: " +
			    Generator{l.gen}.display());
		if (!out.empty())
			out += ' ';
		out += it->second;
		if (l.sign < 0)
			out += "^-1";
	}
	return out;
}

// Simultaneous rename, so a component name that happens to collide with a
// freshly minted meridian cannot be rewritten twice.
Word rename(const Word &w, const std::map<uint32_t, Generator> &m) {
	std::vector<Letter> out;
	out.reserve(w.size());
	for (const Letter &l : w.letters()) {
		auto it = m.find(l.gen);
		out.push_back(it == m.end() ? l : Letter{it->second.id, l.sign});
	}
	return Word::reduce(out);
}

bool valid_ident(const std::string &s) {
	if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0])))
		return false;
	for (size_t i = 1; i < s.size(); ++i) {
		unsigned char c = static_cast<unsigned char>(s[i]);
		if (!std::isalnum(c) && c != '\'')
			return false;
	}
	return true;
}

// Grammar tokens standing for the components inside longitude strings. Names
// that are not valid identifiers (unlink components are named "1", "2", ...)
// get positional aliases; both directions derive the same table from the
// ordered name list, so aliased links still round-trip.
std::vector<std::string> component_tokens(const std::vector<std::string> &names) {
	std::set<std::string> used(names.begin(), names.end());
	used.insert("Lambda");
	std::vector<std::string> toks;
	for (size_t i = 0; i < names.size(); ++i) {
		std::string t = names[i];
		if (!valid_ident(t)) {
			t = "c" + std::to_string(i);
			while (used.count(t))
				t += '\'';
		}
		toks.push_back(t);
		used.insert(t);
	}
	return toks;
}

std::map<uint32_t, std::string> name_table(const LinkPresentation &link) {
	std::vector<std::string> names;
	for (const Component &c : link.components)
		names.push_back(c.name);
	std::vector<std::string> toks = component_tokens(names);
	std::map<uint32_t, std::string> out;
	for (size_t i = 0; i < link.components.size(); ++i)
		out[link.components[i].meridian.id] = toks[i];
	out[lambda_symbol().id] = "Lambda";
	return out;
}

json components_json(const LinkPresentation &link) {
	auto names = name_table(link);
	json comps = json::array();
	for (const Component &c : link.components)
		comps.push_back({{"name", c.name},
		                 {"framing", c.framing},
		                 {"longitude", word_text(c.longitude, names)}});
	return comps;
}

std::vector<std::string> monomial_names(const Monomial &m) {
	std::vector<std::string> out;
	for (uint32_t v : m.vars)
		out.push_back(Generator{v}.display());
	return out;
}

std::string plain_text(const Word &w) { return print_word(word_expr(w)); }

} // namespace

json link_to_json(const LinkPresentation &link) {
	return {{"ambient",
	         link.ambient == Ambient::Sphere ? "sphere" : "torus"},
	        {"components", components_json(link)}};
}

LinkPresentation link_from_json(const json &j) {
	LinkPresentation link;
	std::string ambient = j.at("ambient").get<std::string>();
	if (ambient == "sphere")
		link.ambient = Ambient::Sphere;
	else if (ambient == "torus")
		link.ambient = Ambient::SolidTorus;
	else
		throw std::invalid_argument("unknown ambient: " + ambient);

	std::vector<std::string> texts;
	for (const json &c : j.at("components")) {
		Component comp;
		comp.name = c.at("name").get<std::string>();
		comp.framing = c.at("framing").get<int>();
		if (comp.framing != 0)
			throw std::invalid_argument("framings must be zero");
		comp.meridian = fresh_meridian();
		texts.push_back(c.at("longitude").get<std::string>());
		link.components.push_back(std::move(comp));
	}
	std::vector<std::string> names;
	for (const Component &c : link.components)
		names.push_back(c.name);
	std::vector<std::string> toks = component_tokens(names);
	std::map<uint32_t, Generator> remap;
	remap[generator_named("Lambda").id] = lambda_symbol();
	for (size_t i = 0; i < link.components.size(); ++i)
		remap[generator_named(toks[i]).id] = link.components[i].meridian;
	for (size_t i = 0; i < link.components.size(); ++i)
		link.components[i].longitude =
		    rename(parse_word(texts[i]).expand(), remap);
	return link;
}

json pattern_to_json(const Pattern &p) {
	json j = link_to_json(p.link);
	j["meridian_class"] = word_text(p.meridian_class, name_table(p.link));
	return j;
}

Pattern pattern_from_json(const json &j) {
	Pattern p;
	p.link = link_from_json(j);
	if (p.link.ambient != Ambient::SolidTorus)
		throw std::invalid_argument("patterns live in a torus");
	std::vector<std::string> names;
	for (const Component &c : p.link.components)
		names.push_back(c.name);
	std::vector<std::string> toks = component_tokens(names);
	std::map<uint32_t, Generator> remap;
	remap[generator_named("Lambda").id] = lambda_symbol();
	for (size_t i = 0; i < p.link.components.size(); ++i)
		remap[generator_named(toks[i]).id] = p.link.components[i].meridian;
	p.meridian_class = rename(
	    parse_word(j.at("meridian_class").get<std::string>()).expand(), remap);
	return p;
}

json series_to_json(const Series &s) {
	json terms = json::array();
	for (const auto &t : s.terms())
		terms.push_back(
		    {{"coeff", t.coeff}, {"monomial", monomial_names(t.mono)}});
	return terms;
}

json decomposition_to_json(const Decomposition &d) {
	json terms = json::array();
	for (const DecompositionTerm &t : d.terms) {
		json basic = {{"p", t.basic.p},
		              {"q", t.basic.q},
		              {"a", t.basic.a.display()},
		              {"b", t.basic.b.display()},
		              {"rest", json::array()}};
		for (Generator r : t.basic.rest)
			basic["rest"].push_back(r.display());
		terms.push_back({{"exponent", t.exponent},
		                 {"conjugator", plain_text(t.conjugator)},
		                 {"basic", std::move(basic)}});
	}
	return {{"ok", d.ok},
	        {"terms", std::move(terms)},
	        {"residual", series_to_json(d.residual)}};
}

json witness_to_json(const HTrivialWitness &w) {
	json j = {{"component", w.component},
	          {"coefficient", w.coeff},
	          {"monomial", monomial_names(w.mono)}};
	if (!w.copied.empty())
		j["copied"] = w.copied;
	return j;
}

json report_to_json(const VerifyReport &r) {
	json checks = json::array();
	for (const CheckResult &c : r.checks) {
		json jc = {{"name", c.name}, {"pass", c.pass}};
		if (!c.witness.empty())
			jc["witness"] = c.witness;
		checks.push_back(std::move(jc));
	}
	return {{"instance", r.instance},
	        {"seed", r.seed},
	        {"mode", r.mode},
	        {"checks", std::move(checks)},
	        {"timings", {{"seconds", r.seconds}}}};
}

json relslice_to_json(const RelSliceProblem &p) {
	json ownership = json::object();
	for (const auto &[name, tag] : p.ownership)
		ownership[name] = tag;
	return {{"j_side", link_to_json(p.j_side)},
	        {"k_side", link_to_json(p.k_side)},
	        {"ownership", std::move(ownership)}};
}

} // namespace linkhom
