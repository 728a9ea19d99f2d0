#include "koecher/serialize.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <stdexcept>

namespace koecher {

void to_json(Json& j, const OElt& x) { j = Json::array({x[0], x[1], x[2]}); }
void from_json(const Json& j, OElt& x) { x = OElt(j.at(0).get<Int>(), j.at(1).get<Int>(), j.at(2).get<Int>()); }

void to_json(Json& j, const FElt& x) { j = Json::array({x[0].get_str(), x[1].get_str(), x[2].get_str()}); }
void from_json(const Json& j, FElt& x) {
  std::array<mpq_class, 3> c;
  for (int i = 0; i < 3; ++i) {
    c[i] = mpq_class(j.at(i).get<std::string>());
    c[i].canonicalize();
  }
  x = FElt(c[0], c[1], c[2]);
}

void to_json(Json& j, const Mat2& m) { j = Json::array({m.a, m.b, m.c, m.d}); }
void from_json(const Json& j, Mat2& m) {
  m = Mat2{j.at(0).get<OElt>(), j.at(1).get<OElt>(), j.at(2).get<OElt>(), j.at(3).get<OElt>()};
}

void to_json(Json& j, const Ideal& a) {
  j = Json{{"hnf", a.hnf()}, {"generator", a.generator().str()}, {"norm", a.norm()}};
}
void from_json(const Json& j, Ideal& a) { a = Ideal::from_hnf(j.at("hnf").get<Ideal::Hnf>()); }

void to_json(Json& j, const PrimeIdeal& p) {
  j = Json{{"p", p.p}, {"degree", p.degree}, {"ram", p.ram}, {"ideal", p.ideal}, {"generator", p.gen}, {"poly", p.poly}};
}
void from_json(const Json& j, PrimeIdeal& p) {
  p.p = j.at("p").get<Int>();
  p.degree = j.at("degree").get<int>();
  p.ram = j.at("ram").get<int>();
  p.ideal = j.at("ideal").get<Ideal>();
  p.gen = j.at("generator").get<OElt>();
  p.poly = j.at("poly").get<std::vector<Int>>();
}

void to_json(Json& j, const Curve& e) { j = e.str(); }
void from_json(const Json& j, Curve& e) { e = Curve::parse(j.get<std::string>()); }

Json fan_to_json(const FanDatabase& fan) {
  Json top = Json::array();
  for (const auto& t : fan.top) {
    Json facets = Json::array(), neighbors = Json::array();
    for (const auto& f : t.facets) facets.push_back({{"vertices", f.vertices}, {"normal", f.normal}});
    for (const auto& n : t.neighbors) neighbors.push_back({{"rep", n.rep}, {"g", n.g}});
    top.push_back({{"form", t.perfect.form}, {"vectors", t.perfect.vectors}, {"facets", facets}, {"neighbors", neighbors}});
  }
  Json cones = Json::object(), faces = Json::object();
  for (int k = 1; k <= 7; ++k) {
    Json list = Json::array();
    for (const auto& c : fan.cones[k])
      list.push_back({{"vectors", c.vectors},
                      {"dim", c.dim},
                      {"interior", c.interior},
                      {"stabilizer", c.stabilizer},
                      {"character", c.character}});
    cones[std::to_string(k)] = list;
    if (fan.faces[k].empty()) continue;
    Json maps = Json::array();
    for (const auto& row : fan.faces[k]) {
      Json r = Json::array();
      for (const auto& fm : row) r.push_back({{"rep", fm.rep}, {"g", fm.g}, {"sign", fm.sign}});
      maps.push_back(r);
    }
    faces[std::to_string(k)] = maps;
  }
  return {{"kind", "koecher-fan"}, {"counts", fan.counts()}, {"top", top}, {"cones", cones}, {"faces", faces}};
}

FanDatabase fan_from_json(const Json& j) {
  if (j.value("kind", "") != "koecher-fan") throw std::invalid_argument("not a fan file");
  FanDatabase fan;
  for (const auto& t : j.at("top")) {
    TopCone top;
    top.perfect.form = t.at("form").get<Form>();
    top.perfect.vectors = t.at("vectors").get<std::vector<Vec2>>();
    for (const auto& f : t.at("facets"))
      top.facets.push_back({f.at("vertices").get<std::vector<int>>(), f.at("normal").get<Form>()});
    for (const auto& n : t.at("neighbors")) top.neighbors.push_back({n.at("rep").get<int>(), n.at("g").get<Mat2>()});
    fan.top.push_back(std::move(top));
  }
  for (int k = 1; k <= 7; ++k) {
    const std::string key = std::to_string(k);
    for (const auto& c : j.at("cones").at(key)) {
      Cone cone;
      cone.vectors = c.at("vectors").get<std::vector<Vec2>>();
      cone.dim = c.at("dim").get<int>();
      cone.interior = c.at("interior").get<bool>();
      cone.stabilizer = c.at("stabilizer").get<std::vector<Mat2>>();
      cone.character = c.at("character").get<std::vector<int>>();
      fan.cones[k].push_back(std::move(cone));
    }
    if (!j.at("faces").contains(key)) continue;
    for (const auto& row : j.at("faces").at(key)) {
      std::vector<FaceMap> maps;
      for (const auto& fm : row) maps.push_back({fm.at("rep").get<int>(), fm.at("g").get<Mat2>(), fm.at("sign").get<int>()});
      fan.faces[k].push_back(std::move(maps));
    }
  }
  return fan;
}

namespace {

Json felt_text(const FElt& x) { return x.str(); }

}  // namespace

Json curves_to_json(const SearchResult& r) {
  Json curves = Json::array();
  for (const auto& c : r.curves) {
    curves.push_back({{"curve", c.curve},
                      {"disc", c.curve.discriminant().str()},
                      {"disc_norm", c.disc_norm},
                      {"j", felt_text(c.curve.j_invariant())},
                      {"conductor", c.conductor}});
  }
  Json classes = Json::array();
  for (const auto& c : r.classes)
    classes.push_back({{"representative", c.representative},
                       {"conductor", c.conductor},
                       {"j", felt_text(c.j)},
                       {"members", c.members}});
  return {{"kind", "koecher-curves"},
          {"tuples", r.tuples},
          {"disc_passed", r.disc_passed},
          {"curve_count", r.curves.size()},
          {"class_count", r.classes.size()},
          {"classes", classes},
          {"curves", curves}};
}

std::vector<CurveClass> classes_from_json(const Json& j) {
  if (j.value("kind", "") != "koecher-curves") throw std::invalid_argument("not a curves file");
  std::vector<CurveClass> out;
  for (const auto& c : j.at("classes")) {
    CurveClass cc;
    cc.representative = c.at("representative").get<Curve>();
    cc.conductor = c.at("conductor").get<Ideal>();
    cc.j = cc.representative.j_invariant();
    cc.members = c.at("members").get<std::size_t>();
    out.push_back(std::move(cc));
  }
  return out;
}

Json packet_to_json(const Eigenpacket& p) {
  Json evs = Json::array();
  for (const auto& e : p.eigenvalues) {
    Json v = e.value ? Json(*e.value) : Json("non-rational");
    evs.push_back({{"prime", e.prime}, {"norm", e.prime.norm()}, {"value", v}});
  }
  Json j{{"level", p.level}, {"dimension", p.dimension}, {"kind", kind_name(p.kind)}, {"eigenvalues", evs}};
  if (p.source) j["source"] = *p.source;
  return j;
}

Eigenpacket packet_from_json(const Json& j) {
  Eigenpacket p;
  p.level = j.at("level").get<Ideal>();
  p.dimension = j.at("dimension").get<int>();
  p.kind = parse_kind(j.at("kind").get<std::string>());
  if (j.contains("source")) p.source = j.at("source").get<Ideal>();
  for (const auto& e : j.at("eigenvalues")) {
    PacketEigenvalue ev{e.at("prime").get<PrimeIdeal>(), std::nullopt};
    if (e.at("value").is_number_integer()) ev.value = e.at("value").get<Int>();
    p.eigenvalues.push_back(std::move(ev));
  }
  return p;
}

Json report_to_json(const MatchReport& r) {
  Json packets = Json::array();
  for (const auto& m : r.packets) {
    packets.push_back({{"packet", packet_to_json(m.packet)},
                       {"candidates", m.candidates},
                       {"matched", !m.candidates.empty()},
                       {"ambiguous", m.ambiguous},
                       {"primes_checked", m.primes_checked},
                       {"agreements", m.agreements},
                       {"extra_primes_checked", m.extra_primes_checked}});
  }
  return {{"level", r.level}, {"packets", packets}, {"unmatched_curves", r.unmatched_curves}};
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("sha256 failed");
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    out += buf;
  }
  return out;
}

}  // namespace koecher
