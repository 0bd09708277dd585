#include "cechg/json_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

namespace cechg {

namespace {

// Splits a two-part key "a|b"; SchemaError when malformed.
std::pair<std::string, std::string> splitKey(const std::string& key) {
  auto pos = key.find('|');
  if (pos == std::string::npos || key.find('|', pos + 1) != std::string::npos)
    throw SchemaError("malformed pair key: " + key);
  return {key.substr(0, pos), key.substr(pos + 1)};
}

const json& expectField(const json& j, const std::string& field,
                        const std::string& context) {
  auto it = j.find(field);
  if (it == j.end())
    throw SchemaError(context + ": missing field '" + field + "'");
  return *it;
}

IndexedSet idArray(const json& j, const std::string& context) {
  if (!j.is_array()) throw SchemaError(context + ": expected an array of ids");
  IndexedSet out;
  for (const auto& v : j) {
    if (!v.is_string()) throw SchemaError(context + ": ids must be strings");
    out.add(v.get<std::string>());  // duplicates rejected by IndexedSet
  }
  return out;
}

// Resolves a groupoid reference: inline object or a path string relative to
// the directory of the referencing file.
json resolveRef(const json& j, const std::string& baseDir) {
  if (j.is_object()) return j;
  if (j.is_string()) {
    std::string path = j.get<std::string>();
    if (!baseDir.empty() && !path.empty() && path.front() != '/')
      path = baseDir + "/" + path;
    return load_json_file(path);
  }
  throw SchemaError("reference must be an inline object or a file path");
}

}  // namespace

json groupoid_to_json(const FiniteGroupoid& g) {
  json j;
  j["objects"] = g.objects.names();
  json arrows = json::array();
  for (int a = 0; a < g.nArrows(); ++a)
    arrows.push_back({{"id", g.arrows.name(a)},
                      {"src", g.objects.name(g.src[a])},
                      {"tgt", g.objects.name(g.tgt[a])}});
  j["arrows"] = arrows;
  json units = json::object();
  for (int x = 0; x < g.nObjects(); ++x)
    units[g.objects.name(x)] = g.arrows.name(g.unit[x]);
  j["units"] = units;
  json inv = json::object();
  for (int a = 0; a < g.nArrows(); ++a)
    inv[g.arrows.name(a)] = g.arrows.name(g.inv[a]);
  j["inv"] = inv;
  json comp = json::array();
  for (int a = 0; a < g.nArrows(); ++a)
    for (int b = 0; b < g.nArrows(); ++b)
      if (g.composeOpt(a, b) >= 0)
        comp.push_back({g.arrows.name(a), g.arrows.name(b),
                        g.arrows.name(g.composeOpt(a, b))});
  j["comp"] = comp;
  return j;
}

FiniteGroupoid groupoid_from_json(const json& j) {
  IndexedSet objects = idArray(expectField(j, "objects", "groupoid"),
                               "groupoid.objects");
  IndexedSet arrows;
  std::vector<int> src, tgt;
  for (const auto& arrow : expectField(j, "arrows", "groupoid")) {
    arrows.add(expectField(arrow, "id", "groupoid.arrows").get<std::string>());
    src.push_back(objects.at(
        expectField(arrow, "src", "groupoid.arrows").get<std::string>()));
    tgt.push_back(objects.at(
        expectField(arrow, "tgt", "groupoid.arrows").get<std::string>()));
  }
  std::vector<int> unit(objects.size(), -1);
  for (const auto& [obj, arr] :
       expectField(j, "units", "groupoid").items()) {
    int x = objects.at(obj);
    if (unit[x] >= 0) throw SchemaError("duplicate unit entry for " + obj);
    unit[x] = arrows.at(arr.get<std::string>());
  }
  for (int x = 0; x < objects.size(); ++x)
    if (unit[x] < 0)
      throw SchemaError("missing unit for object " + objects.name(x));
  std::vector<int> inv(arrows.size(), -1);
  for (const auto& [a, b] : expectField(j, "inv", "groupoid").items()) {
    int idx = arrows.at(a);
    if (inv[idx] >= 0) throw SchemaError("duplicate inverse entry for " + a);
    inv[idx] = arrows.at(b.get<std::string>());
  }
  for (int a = 0; a < arrows.size(); ++a)
    if (inv[a] < 0)
      throw SchemaError("missing inverse for arrow " + arrows.name(a));
  std::vector<std::array<int, 3>> entries;
  std::map<std::pair<int, int>, int> seen;
  for (const auto& entry : expectField(j, "comp", "groupoid")) {
    if (!entry.is_array() || entry.size() != 3)
      throw SchemaError("composition entries must be [g1, g2, g12] triples");
    int a = arrows.at(entry[0].get<std::string>());
    int b = arrows.at(entry[1].get<std::string>());
    int c = arrows.at(entry[2].get<std::string>());
    if (!seen.emplace(std::make_pair(a, b), c).second)
      throw SchemaError("duplicate composition entry for " +
                        entry[0].get<std::string>() + "·" +
                        entry[1].get<std::string>());
    if (src[a] != tgt[b])
      throw SchemaError("composition entry on a non-composable pair " +
                        entry[0].get<std::string>() + "·" +
                        entry[1].get<std::string>());
    entries.push_back({a, b, c});
  }
  return make_groupoid(std::move(objects), std::move(arrows), std::move(src),
                       std::move(tgt), std::move(unit), std::move(inv),
                       entries);
}

json bundle_to_json(const PrincipalBundle& b) {
  json j;
  j["total"] = b.total.names();
  j["base"] = b.base.names();
  json proj = json::object(), momentum = json::object();
  for (int p = 0; p < b.total.size(); ++p) {
    proj[b.total.name(p)] = b.base.name(b.proj[p]);
    momentum[b.total.name(p)] = b.structure.objects.name(b.momentum[p]);
  }
  j["proj"] = proj;
  j["momentum"] = momentum;
  j["groupoid"] = groupoid_to_json(b.structure);
  json action = json::array();
  for (const auto& [pg, q] : b.action)
    action.push_back({b.total.name(pg.first),
                      b.structure.arrows.name(pg.second), b.total.name(q)});
  j["action"] = action;
  return j;
}

PrincipalBundle bundle_from_json(const json& j, const std::string& baseDir) {
  PrincipalBundle b;
  b.total = idArray(expectField(j, "total", "bundle"), "bundle.total");
  b.base = idArray(expectField(j, "base", "bundle"), "bundle.base");
  b.structure =
      groupoid_from_json(resolveRef(expectField(j, "groupoid", "bundle"),
                                    baseDir));
  b.proj.assign(b.total.size(), -1);
  for (const auto& [p, m] : expectField(j, "proj", "bundle").items()) {
    int idx = b.total.at(p);
    if (b.proj[idx] >= 0) throw SchemaError("duplicate proj entry for " + p);
    b.proj[idx] = b.base.at(m.get<std::string>());
  }
  b.momentum.assign(b.total.size(), -1);
  for (const auto& [p, x] : expectField(j, "momentum", "bundle").items()) {
    int idx = b.total.at(p);
    if (b.momentum[idx] >= 0)
      throw SchemaError("duplicate momentum entry for " + p);
    b.momentum[idx] = b.structure.objects.at(x.get<std::string>());
  }
  for (int p = 0; p < b.total.size(); ++p) {
    if (b.proj[p] < 0)
      throw SchemaError("missing proj entry for " + b.total.name(p));
    if (b.momentum[p] < 0)
      throw SchemaError("missing momentum entry for " + b.total.name(p));
  }
  for (const auto& entry : expectField(j, "action", "bundle")) {
    if (!entry.is_array() || entry.size() != 3)
      throw SchemaError("action entries must be [p, g, pg] triples");
    int p = b.total.at(entry[0].get<std::string>());
    int g = b.structure.arrows.at(entry[1].get<std::string>());
    int q = b.total.at(entry[2].get<std::string>());
    if (!b.action.emplace(std::make_pair(p, g), q).second)
      throw SchemaError("duplicate action entry for (" +
                        entry[0].get<std::string>() + ", " +
                        entry[1].get<std::string>() + ")");
  }
  return b;
}

json cover_to_json(const Cover& c) {
  json j;
  j["base"] = c.base.names();
  j["indices"] = c.indices.names();
  json sets = json::object();
  for (int a = 0; a < c.indices.size(); ++a) {
    json points = json::array();
    for (int m : c.sets[a]) points.push_back(c.base.name(m));
    sets[c.indices.name(a)] = points;
  }
  j["sets"] = sets;
  return j;
}

Cover cover_from_json(const json& j) {
  Cover c;
  c.base = idArray(expectField(j, "base", "cover"), "cover.base");
  c.indices = idArray(expectField(j, "indices", "cover"), "cover.indices");
  c.sets.resize(c.indices.size());
  for (const auto& [name, points] : expectField(j, "sets", "cover").items()) {
    int a = c.indices.at(name);
    std::vector<int>& set = c.sets[a];
    if (!set.empty()) throw SchemaError("duplicate set entry for " + name);
    for (const auto& p : points) set.push_back(c.base.at(p.get<std::string>()));
    std::sort(set.begin(), set.end());
    if (std::adjacent_find(set.begin(), set.end()) != set.end())
      throw SchemaError("duplicate point in set " + name);
  }
  Report check = c.validate();
  if (!check.ok()) throw SchemaError("invalid cover: " + check.str());
  return c;
}

json trivdata_to_json(const LocalTrivData& d) {
  json j;
  j["cover"] = cover_to_json(d.cover);
  j["groupoid"] = groupoid_to_json(d.structure);
  json momenta = json::object();
  for (int a = 0; a < d.cover.indices.size(); ++a) {
    json entry = json::object();
    for (const auto& [m, x] : d.momenta[a])
      entry[d.cover.base.name(m)] = d.structure.objects.name(x);
    momenta[d.cover.indices.name(a)] = entry;
  }
  j["momenta"] = momenta;
  json cocycle = json::object();
  for (const auto& [ab, entries] : d.cocycle) {
    json entry = json::object();
    for (const auto& [m, arr] : entries)
      entry[d.cover.base.name(m)] = d.structure.arrows.name(arr);
    cocycle[d.cover.indices.name(ab.first) + "|" +
            d.cover.indices.name(ab.second)] = entry;
  }
  j["cocycle"] = cocycle;
  return j;
}

LocalTrivData trivdata_from_json(const json& j, const std::string& baseDir) {
  LocalTrivData d;
  d.cover = cover_from_json(expectField(j, "cover", "trivdata"));
  d.structure = groupoid_from_json(
      resolveRef(expectField(j, "groupoid", "trivdata"), baseDir));
  d.momenta.resize(d.cover.indices.size());
  for (const auto& [name, entry] :
       expectField(j, "momenta", "trivdata").items()) {
    int a = d.cover.indices.at(name);
    for (const auto& [m, x] : entry.items()) {
      int point = d.cover.base.at(m);
      if (d.momenta[a].count(point))
        throw SchemaError("duplicate momentum entry at (" + name + ", " + m +
                          ")");
      d.momenta[a][point] = d.structure.objects.at(x.get<std::string>());
    }
  }
  for (const auto& [key, entry] :
       expectField(j, "cocycle", "trivdata").items()) {
    auto [aName, bName] = splitKey(key);
    std::pair<int, int> ab{d.cover.indices.at(aName),
                           d.cover.indices.at(bName)};
    if (d.cocycle.count(ab))
      throw SchemaError("duplicate cocycle entry for " + key);
    auto& target = d.cocycle[ab];
    for (const auto& [m, arr] : entry.items())
      target[d.cover.base.at(m)] = d.structure.arrows.at(arr.get<std::string>());
  }
  return d;
}

json genmor_to_json(const GeneralizedMorphism& m) {
  json j;
  j["source"] = groupoid_to_json(m.source);
  j["bundle"] = bundle_to_json(m.bundle);
  json left = json::array();
  for (const auto& [gp, q] : m.left)
    left.push_back({m.source.arrows.name(gp.first),
                    m.bundle.total.name(gp.second),
                    m.bundle.total.name(q)});
  j["left"] = left;
  return j;
}

GeneralizedMorphism genmor_from_json(const json& j,
                                     const std::string& baseDir) {
  GeneralizedMorphism m;
  m.source = groupoid_from_json(
      resolveRef(expectField(j, "source", "genmor"), baseDir));
  m.bundle = bundle_from_json(
      resolveRef(expectField(j, "bundle", "genmor"), baseDir), baseDir);
  for (const auto& entry : expectField(j, "left", "genmor")) {
    if (!entry.is_array() || entry.size() != 3)
      throw SchemaError("left action entries must be [g, p, gp] triples");
    int g = m.source.arrows.at(entry[0].get<std::string>());
    int p = m.bundle.total.at(entry[1].get<std::string>());
    int q = m.bundle.total.at(entry[2].get<std::string>());
    if (!m.left.emplace(std::make_pair(g, p), q).second)
      throw SchemaError("duplicate left action entry");
  }
  return m;
}

json locgenmor_to_json(const LocalGeneralizedMorphism& m) {
  json j = trivdata_to_json(m.data);
  j["source"] = groupoid_to_json(m.source);
  json theta = json::object();
  for (const auto& [ba, entry] : m.theta) {
    json e = json::object();
    for (const auto& [arr, img] : entry)
      e[m.source.arrows.name(arr)] = m.data.structure.arrows.name(img);
    theta[m.data.cover.indices.name(ba.first) + "|" +
          m.data.cover.indices.name(ba.second)] = e;
  }
  j["theta"] = theta;
  return j;
}

LocalGeneralizedMorphism locgenmor_from_json(const json& j,
                                             const std::string& baseDir) {
  LocalGeneralizedMorphism m;
  m.source = groupoid_from_json(
      resolveRef(expectField(j, "source", "locgenmor"), baseDir));
  m.data = trivdata_from_json(j, baseDir);
  for (const auto& [key, entry] :
       expectField(j, "theta", "locgenmor").items()) {
    auto [bName, aName] = splitKey(key);
    std::pair<int, int> ba{m.data.cover.indices.at(bName),
                           m.data.cover.indices.at(aName)};
    if (m.theta.count(ba)) throw SchemaError("duplicate theta entry for " + key);
    auto& target = m.theta[ba];
    for (const auto& [arr, img] : entry.items())
      target[m.source.arrows.at(arr)] =
          m.data.structure.arrows.at(img.get<std::string>());
  }
  return m;
}

json local_morita_to_json(const LocalMoritaEquivalence& m) {
  json j;
  j["theta"] = locgenmor_to_json(m.theta);
  j["eta"] = locgenmor_to_json(m.eta);
  json pt = json::object();
  for (const auto& [ai, entry] : m.phiTheta) {
    json e = json::object();
    for (const auto& [x, arr] : entry)
      e[m.theta.data.cover.base.name(x)] = m.theta.source.arrows.name(arr);
    pt[m.theta.data.cover.indices.name(ai.first) + "|" +
       m.eta.data.cover.indices.name(ai.second)] = e;
  }
  j["phi_theta"] = pt;
  json pe = json::object();
  for (const auto& [ia, entry] : m.phiEta) {
    json e = json::object();
    for (const auto& [y, arr] : entry)
      e[m.eta.data.cover.base.name(y)] = m.eta.source.arrows.name(arr);
    pe[m.eta.data.cover.indices.name(ia.first) + "|" +
       m.theta.data.cover.indices.name(ia.second)] = e;
  }
  j["phi_eta"] = pe;
  return j;
}

LocalMoritaEquivalence local_morita_from_json(const json& j,
                                              const std::string& baseDir) {
  LocalMoritaEquivalence m;
  m.theta = locgenmor_from_json(
      resolveRef(expectField(j, "theta", "localmorita"), baseDir), baseDir);
  m.eta = locgenmor_from_json(
      resolveRef(expectField(j, "eta", "localmorita"), baseDir), baseDir);
  for (const auto& [key, entry] :
       expectField(j, "phi_theta", "localmorita").items()) {
    auto [aName, iName] = splitKey(key);
    std::pair<int, int> ai{m.theta.data.cover.indices.at(aName),
                           m.eta.data.cover.indices.at(iName)};
    auto& target = m.phiTheta[ai];
    for (const auto& [x, arr] : entry.items())
      target[m.theta.data.cover.base.at(x)] =
          m.theta.source.arrows.at(arr.get<std::string>());
  }
  for (const auto& [key, entry] :
       expectField(j, "phi_eta", "localmorita").items()) {
    auto [iName, aName] = splitKey(key);
    std::pair<int, int> ia{m.eta.data.cover.indices.at(iName),
                           m.theta.data.cover.indices.at(aName)};
    auto& target = m.phiEta[ia];
    for (const auto& [y, arr] : entry.items())
      target[m.eta.data.cover.base.at(y)] =
          m.eta.source.arrows.at(arr.get<std::string>());
  }
  return m;
}

json finite_map_to_json(const FiniteMap& f) {
  json j;
  j["domain"] = f.domain.names();
  j["codomain"] = f.codomain.names();
  json map = json::object();
  for (int x = 0; x < f.domain.size(); ++x)
    map[f.domain.name(x)] = f.codomain.name(f.map[x]);
  j["map"] = map;
  return j;
}

FiniteMap finite_map_from_json(const json& j) {
  FiniteMap f;
  f.domain = idArray(expectField(j, "domain", "map"), "map.domain");
  f.codomain = idArray(expectField(j, "codomain", "map"), "map.codomain");
  f.map.assign(f.domain.size(), -1);
  for (const auto& [x, y] : expectField(j, "map", "map").items()) {
    int idx = f.domain.at(x);
    if (f.map[idx] >= 0) throw SchemaError("duplicate map entry for " + x);
    f.map[idx] = f.codomain.at(y.get<std::string>());
  }
  for (int x = 0; x < f.domain.size(); ++x)
    if (f.map[x] < 0)
      throw SchemaError("missing map entry for " + f.domain.name(x));
  return f;
}

json group_to_json(const GroupTable& t) {
  json j;
  j["elements"] = t.elements.names();
  json table = json::array();
  for (int a = 0; a < t.n(); ++a) {
    json row = json::array();
    for (int b = 0; b < t.n(); ++b) row.push_back(t.elements.name(t.times(a, b)));
    table.push_back(row);
  }
  j["table"] = table;
  return j;
}

GroupTable group_from_json(const json& j) {
  GroupTable t;
  t.elements = idArray(expectField(j, "elements", "group"), "group.elements");
  const auto& table = expectField(j, "table", "group");
  if (!table.is_array() || static_cast<int>(table.size()) != t.n())
    throw SchemaError("group table must be an n x n array");
  t.mul.resize(static_cast<size_t>(t.n()) * t.n());
  for (int a = 0; a < t.n(); ++a) {
    if (static_cast<int>(table[a].size()) != t.n())
      throw SchemaError("group table row has the wrong length");
    for (int b = 0; b < t.n(); ++b)
      t.mul[static_cast<size_t>(a) * t.n() + b] =
          t.elements.at(table[a][b].get<std::string>());
  }
  Report check = validate_group(t);
  if (!check.ok()) throw SchemaError("not a group: " + check.str());
  t.identity = group_identity(t);
  return t;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write " + path);
  out << std::setw(2) << j << "\n";
}

std::string json_digest(const json& j) {
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << fnv1a(j.dump());
  return hex.str();
}

}  // namespace cechg
