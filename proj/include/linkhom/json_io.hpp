#pragma once

#include "json.hpp"

#include "linkhom/engel.hpp"
#include "linkhom/links.hpp"
#include "linkhom/pipeline.hpp"

namespace linkhom {

// Link schema:
//   {"ambient": "sphere"|"torus",
//    "components": [{"name": str, "framing": 0, "longitude": word-string}],
//    "meridian_class": word-string?}
// Longitudes are written in the word grammar over component names (plus
// "Lambda" for the companion symbol in a torus); loading interns fresh
// meridians, so round trips are name-faithful rather than id-faithful.
nlohmann::json link_to_json(const LinkPresentation &link);
LinkPresentation link_from_json(const nlohmann::json &j);

nlohmann::json pattern_to_json(const Pattern &p);
Pattern pattern_from_json(const nlohmann::json &j);

nlohmann::json series_to_json(const Series &s);
nlohmann::json decomposition_to_json(const Decomposition &d);
nlohmann::json witness_to_json(const HTrivialWitness &w);

// {"instance", "seed", "mode", "checks": [{"name","pass","witness"?}],
//  "timings": {"seconds": ...}}
nlohmann::json report_to_json(const VerifyReport &r);

nlohmann::json relslice_to_json(const RelSliceProblem &p);

} // namespace linkhom
