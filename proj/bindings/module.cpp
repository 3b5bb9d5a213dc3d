// Python surface for the calculus. Words cross the boundary as grammar text,
// aggregate results as JSON strings; links and patterns are opaque handles.

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "linkhom/engel.hpp"
#include "linkhom/json_io.hpp"
#include "linkhom/links.hpp"
#include "linkhom/milnor.hpp"
#include "linkhom/pipeline.hpp"
#include "linkhom/wordgrammar.hpp"

namespace py = pybind11;
using namespace linkhom;
using nlohmann::json;

namespace {

Word word_of(const std::string &text) { return parse_word(text).expand(); }

std::string word_str(const Word &w) { return print_word(word_expr(w)); }

std::optional<std::string> opt_witness(const std::optional<HTrivialWitness> &w) {
	if (!w)
		return std::nullopt;
	return witness_to_json(*w).dump();
}

ElementaryVariant variant_of(const std::string &s) {
	if (s == "A" || s == "a")
		return ElementaryVariant::A;
	if (s == "B" || s == "b")
		return ElementaryVariant::B;
	throw std::invalid_argument("variant must be A or B");
}

ElementaryFlavor flavor_of(const std::string &s) {
	if (s == "essential")
		return ElementaryFlavor::Essential;
	if (s == "htrivial")
		return ElementaryFlavor::HTrivial;
	if (s == "prepended")
		return ElementaryFlavor::Prepended;
	throw std::invalid_argument("flavor must be essential, htrivial or "
	                            "prepended");
}

} // namespace

PYBIND11_MODULE(_linkhom, m) {
	m.doc() = "link homotopy calculus";

	py::register_exception<ParseError>(m, "WordSyntaxError");

	py::class_<Word>(m, "Word")
	    .def(py::init(&word_of), py::arg("text"))
	    .def("__str__", &word_str)
	    .def("__repr__",
	         [](const Word &w) { return "Word('" + word_str(w) + "')"; })
	    .def("__len__", &Word::size)
	    .def("__eq__", [](const Word &a, const Word &b) { return a == b; })
	    .def("__mul__", &mul)
	    .def("inverse", &inv)
	    .def("conj", &conj, py::arg("by"))
	    .def_property_readonly("empty", &Word::empty);
	m.def("brack", &brack, py::arg("u"), py::arg("v"));

	py::class_<RepeatPolicy>(m, "RepeatPolicy")
	    .def_static("no_repeat", &RepeatPolicy::no_repeat)
	    .def_static("plus", &RepeatPolicy::plus)
	    .def_static("with_caps", &RepeatPolicy::with_caps, py::arg("cap"));

	py::class_<Series>(m, "Series")
	    .def("__str__", &Series::dump)
	    .def("__len__", &Series::size)
	    .def("__eq__",
	         [](const Series &a, const Series &b) { return a == b; })
	    .def("is_one", &Series::is_one)
	    .def("is_zero", &Series::is_zero)
	    .def("to_json", [](const Series &s) { return series_to_json(s).dump(); });

	m.def(
	    "expand",
	    [](const std::string &text, const RepeatPolicy &p) {
		    return expand_expr(parse_word(text), p);
	    },
	    py::arg("word"), py::arg("policy"));

	py::class_<LinkPresentation>(m, "Link")
	    .def_static(
	        "from_json",
	        [](const std::string &s) { return link_from_json(json::parse(s)); })
	    .def("to_json",
	         [](const LinkPresentation &l) { return link_to_json(l).dump(2); })
	    .def("__len__",
	         [](const LinkPresentation &l) { return l.components.size(); })
	    .def_property_readonly("names",
	                           [](const LinkPresentation &l) {
		                           std::vector<std::string> out;
		                           for (const Component &c : l.components)
			                           out.push_back(c.name);
		                           return out;
	                           })
	    .def("index_of", &LinkPresentation::index_of)
	    .def("lk", &LinkPresentation::lk)
	    .def("longitude", [](const LinkPresentation &l, size_t i) {
		    return l.components.at(i).longitude;
	    });

	py::class_<Pattern>(m, "Pattern")
	    .def_static(
	        "from_json",
	        [](const std::string &s) {
		        return pattern_from_json(json::parse(s));
	        })
	    .def("to_json",
	         [](const Pattern &p) { return pattern_to_json(p).dump(2); })
	    .def_property_readonly("link",
	                           [](const Pattern &p) { return p.link; })
	    .def_property_readonly(
	        "meridian_class",
	        [](const Pattern &p) { return p.meridian_class; })
	    .def("winding_zero", &Pattern::winding_zero);

	// constructors
	m.def("hopf", &hopf);
	m.def(
	    "unlink", [](int n) { return linkhom::unlink(n); }, py::arg("n"));
	m.def("borromean", [] { return bing_double(hopf(), 1); });
	m.def("gbr_from_json", [](const std::string &s) {
		json j = json::parse(s);
		GbrSpec spec; // schema mirrors the command-line builder
		auto node = [](const json &n, auto &&self) -> GbrNode {
			if (n.is_string())
				return GbrNode::leaf();
			if (n.contains("bing"))
				return GbrNode::bing(self(n.at("bing")[0], self),
				                     self(n.at("bing")[1], self));
			std::vector<GbrNode> kids;
			for (const json &c : n.at("ramify"))
				kids.push_back(self(c, self));
			return GbrNode::ramify(std::move(kids));
		};
		if (j.contains("first"))
			spec.first = node(j.at("first"), node);
		if (j.contains("second"))
			spec.second = node(j.at("second"), node);
		return gbr(spec);
	});
	m.def("trivial_pattern", &trivial_pattern);
	m.def("bing_pattern", &bing_pattern);
	m.def("whitehead_pattern", &whitehead_pattern);
	m.def("fig3_pattern", &fig3_pattern);
	m.def(
	    "elementary_link",
	    [](const std::string &variant, const std::string &flavor) {
		    return elementary_link(variant_of(variant), flavor_of(flavor));
	    },
	    py::arg("variant"), py::arg("flavor"));

	// operators
	m.def("satellite",
	      py::overload_cast<const LinkPresentation &, size_t, const Pattern &,
	                        const Word &>(&satellite),
	      py::arg("link"), py::arg("i"), py::arg("pattern"),
	      py::arg("conjugator") = Word{});
	m.def("bing_double",
	      py::overload_cast<const LinkPresentation &, size_t>(&bing_double));
	m.def("ramify", &ramify);
	m.def("parallel_copy",
	      py::overload_cast<const LinkPresentation &, size_t>(&parallel_copy));
	m.def("delete_component", &delete_component);
	m.def("band_sum",
	      py::overload_cast<const LinkPresentation &, size_t, size_t,
	                        const Word &>(&band_sum),
	      py::arg("link"), py::arg("i"), py::arg("j"),
	      py::arg("conjugator") = Word{});
	m.def("handle_slide", &handle_slide, py::arg("link"), py::arg("i"),
	      py::arg("j"), py::arg("conjugator") = Word{}, py::arg("sign") = 1);
	m.def("with_meridian", &with_meridian);
	m.def("complement_pattern", &complement_pattern);
	m.def("embed_standard", &embed_standard);
	m.def("split_union", &split_union);

	// invariants
	m.def("is_h_trivial", &is_h_trivial);
	m.def("h_trivial_witness",
	      [](const LinkPresentation &l) { return opt_witness(h_trivial_witness(l)); });
	m.def(
	    "is_h_trivial_plus",
	    [](const LinkPresentation &l, int jobs) {
		    return is_h_trivial_plus(l, jobs);
	    },
	    py::arg("link"), py::arg("jobs") = 1);
	m.def("is_h_trivial_in_torus", &is_h_trivial_in_torus);
	m.def("mu_bar", &mu_bar, py::arg("link"), py::arg("idx"), py::arg("j"));
	m.def("longitude_series", &longitude_series);

	// decomposition and the end-to-end instances
	m.def(
	    "decompose",
	    [](const std::string &text, bool fivefold) {
		    Word target = word_of(text);
		    std::vector<Generator> ctx = target.support();
		    std::sort(ctx.begin(), ctx.end(),
		              [](Generator a, Generator b) {
			              return a.display() < b.display();
		              });
		    return decomposition_to_json(
		               decompose_top_degree(
		                   target, ctx,
		                   fivefold ? BasisKind::FirstEntryGenerator
		                            : BasisKind::Full))
		        .dump(2);
	    },
	    py::arg("word"), py::arg("fivefold") = false);
	m.def("motivating_example", &motivating_example);
	m.def("scaled_instance", &scaled_instance, py::arg("fivefold") = false);
	m.def(
	    "verify_scaled",
	    [](const std::string &mode, int factors, int jobs, uint64_t seed) {
		    BuildOptions opts;
		    opts.factors_per_torus = factors;
		    opts.seed = seed;
		    VerifyMode vm;
		    int k = 4;
		    if (mode == "lsharp-copies")
			    vm = VerifyMode::LsharpCopies;
		    else if (mode == "k0-plus")
			    vm = VerifyMode::K0Plus;
		    else if (mode == "l0-copy") {
			    vm = VerifyMode::L0Copy;
			    opts.fivefold = true;
			    k = 5;
		    } else
			    throw std::invalid_argument("unknown mode: " + mode);
		    StabilizationPlan plan =
		        build_stabilization(scaled_instance(opts.fivefold), k, opts);
		    return report_to_json(verify_theorem1(plan, vm, jobs)).dump(2);
	    },
	    py::arg("mode"), py::arg("factors") = 1, py::arg("jobs") = 1,
	    py::arg("seed") = 0);
}
