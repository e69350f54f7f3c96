#ifndef GMX_JSON_IO_HPP_
#define GMX_JSON_IO_HPP_

#include <string>

#include "json.hpp"

#include "gmx/entropy.hpp"
#include "gmx/fan.hpp"
#include "gmx/machine.hpp"

namespace gmx {

using Json = nlohmann::json;

Json rat_to_json(const Rat& q);
Rat rat_from_json(const Json& j);

Json unipoly_to_json(const UniPoly& p);
UniPoly unipoly_from_json(const Json& j);

/// Sparse monomial list: [{"exps": [..], "coeff": "num/den"}].
Json multipoly_to_json(const MultiPoly& p);
MultiPoly multipoly_from_json(const Json& j);

Json coord_to_json(const Coord& c);
Coord coord_from_json(const Json& j);

Json region_to_json(const Region& r);
Region region_from_json(const Json& j);

Json presentation_to_json(const MonoidPresentation& p);
MonoidPresentation presentation_from_json(const Json& j);

Json conflict_to_json(const ConflictRelation& c);
ConflictRelation conflict_from_json(const Json& j);

Json action_to_json(const GeneratorAction& a);
GeneratorAction action_from_json(const Json& j);

Json amc_to_json(const Amc& a);
Amc amc_from_json(const Json& j);

/// Self-contained: embeds the ambient AMC.
Json graphing_to_json(const GraphingRep& g);
GraphingRep graphing_from_json(const Json& j);

Json polysystem_to_json(const PolySystem& s);
PolySystem polysystem_from_json(const Json& j);

/// Edge capacities as "a*L+b" strings.
Json network_to_json(const ParamNetwork& n);
ParamNetwork network_from_json(const Json& j);

Json fan_to_json(const RhoFan& f);
RhoFan fan_from_json(const Json& j);

Json surface_to_json(const Surface& s);
Surface surface_from_json(const Json& j);

std::string cotree_to_dot(const CoTree& t);
std::string forest_to_dot(const Forest& f);

}  // namespace gmx

#endif  // GMX_JSON_IO_HPP_
