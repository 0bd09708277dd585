#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "cechg/morita.hpp"
#include "cechg/nerve.hpp"

namespace cechg {

using json = nlohmann::json;

// groupoid.json:
//   {objects:[id], arrows:[{id,src,tgt}], units:{obj:arrow},
//    inv:{arrow:arrow}, comp:[[g1,g2,g12]]}
// comp entries only for composable pairs; duplicates are rejected.
json groupoid_to_json(const FiniteGroupoid& g);
FiniteGroupoid groupoid_from_json(const json& j);

// bundle.json:
//   {total:[id], base:[id], proj:{p:m}, momentum:{p:obj},
//    groupoid:<inline object or file path>, action:[[p,g,pg]]}
json bundle_to_json(const PrincipalBundle& b);
PrincipalBundle bundle_from_json(const json& j, const std::string& baseDir);

// cover.json: {base:[id], indices:[id], sets:{index:[id]}}
json cover_to_json(const Cover& c);
Cover cover_from_json(const json& j);

// trivdata.json:
//   {cover:{base, indices, sets}, groupoid:<ref>, momenta:{a:{m:obj}},
//    cocycle:{"a|b":{m:arrow}}}
json trivdata_to_json(const LocalTrivData& d);
LocalTrivData trivdata_from_json(const json& j, const std::string& baseDir);

// genmor.json:
//   {source:<groupoid ref>, bundle:<bundle.json fields>, left:[[g,p,gp]]}
json genmor_to_json(const GeneralizedMorphism& m);
GeneralizedMorphism genmor_from_json(const json& j, const std::string& baseDir);

// locgenmor.json: trivdata fields plus {source:<groupoid ref>,
//   theta:{"b|a":{arrowG:arrowH}}}
json locgenmor_to_json(const LocalGeneralizedMorphism& m);
LocalGeneralizedMorphism locgenmor_from_json(const json& j,
                                             const std::string& baseDir);

// localmorita.json: {theta:<locgenmor>, eta:<locgenmor>,
//   phi_theta:{"a|i":{m:arrowG}}, phi_eta:{"i|a":{y:arrowH}}}
json local_morita_to_json(const LocalMoritaEquivalence& m);
LocalMoritaEquivalence local_morita_from_json(const json& j,
                                              const std::string& baseDir);

// map.json: {domain:[id], codomain:[id], map:{x:y}}
struct FiniteMap {
  IndexedSet domain;
  IndexedSet codomain;
  std::vector<int> map;
};
json finite_map_to_json(const FiniteMap& f);
FiniteMap finite_map_from_json(const json& j);

// group.json: {elements:[id], table:[[..]]} with table[a][b] = a·b.
json group_to_json(const GroupTable& t);
GroupTable group_from_json(const json& j);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

// Canonical digest of a JSON value (serialization with sorted keys).
std::string json_digest(const json& j);

}  // namespace cechg
