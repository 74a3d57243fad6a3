#include "pmconv/json_io.hpp"

namespace pmconv {

namespace {

json endpoint_to_json(const Endpoint& e, bool left) {
  if (e.kind == Endpoint::Kind::NegInf) return "-inf";
  if (e.kind == Endpoint::Kind::PosInf) return "inf";
  (void)left;
  return format_rational(e.value);
}

Rat rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_number_float()) return rational_from_double(j.get<double>());
  throw std::invalid_argument("expected a rational (string or number)");
}

Endpoint endpoint_from_json(const json& j, bool closed_default, bool left) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "-inf") {
      if (!left) throw std::invalid_argument("-inf right endpoint");
      return Endpoint::neg_inf();
    }
    if (s == "inf") {
      if (left) throw std::invalid_argument("inf left endpoint");
      return Endpoint::pos_inf();
    }
  }
  return Endpoint::finite(rational_from_json(j), closed_default);
}

json bar_to_json(const Interval& bar, size_t mult) {
  json o;
  o["left"] = endpoint_to_json(bar.left, true);
  o["right"] = endpoint_to_json(bar.right, false);
  o["left_closed"] = bar.left.kind == Endpoint::Kind::Finite && bar.left.closed;
  o["right_closed"] = bar.right.kind == Endpoint::Kind::Finite && bar.right.closed;
  o["mult"] = mult;
  return o;
}

std::pair<Interval, size_t> bar_from_json(const json& o) {
  Endpoint l = endpoint_from_json(o.at("left"), o.value("left_closed", true), true);
  Endpoint r = endpoint_from_json(o.at("right"), o.value("right_closed", false), false);
  if (l.kind == Endpoint::Kind::Finite) l.closed = o.value("left_closed", true);
  if (r.kind == Endpoint::Kind::Finite) r.closed = o.value("right_closed", false);
  size_t mult = o.value("mult", 1);
  return {Interval::make(l, r), mult};
}

}  // namespace

json barcode_to_json(const Barcode& b) {
  json bars = json::array();
  for (const auto& [bar, mult] : b.bars()) bars.push_back(bar_to_json(bar, mult));
  return json{{"bars", bars}};
}

Barcode barcode_from_json(const json& j) {
  Barcode out;
  for (const auto& o : j.at("bars")) {
    auto [bar, mult] = bar_from_json(o);
    out.add(bar, mult);
  }
  return out;
}

json graded_barcode_to_json(const GradedBarcode& b) {
  json bars = json::array();
  for (const auto& [deg, bc] : b.degrees())
    for (const auto& [bar, mult] : bc.bars()) {
      json o = bar_to_json(bar, mult);
      o["degree"] = deg;
      bars.push_back(o);
    }
  return json{{"bars", bars}};
}

GradedBarcode graded_barcode_from_json(const json& j) {
  GradedBarcode out;
  for (const auto& o : j.at("bars")) {
    auto [bar, mult] = bar_from_json(o);
    out.add(o.value("degree", 0), bar, mult);
  }
  return out;
}

json module_to_json(const PersistenceModule& m) {
  if (!m.base().is_grid()) throw std::invalid_argument("module_to_json: grid modules only");
  const GridPoset& g = m.base().grid();
  json o;
  o["box"] = {{"lo", g.lo()}, {"hi", g.hi()}};
  o["field"] = m.p();
  o["stabilized_left"] = std::vector<bool>(m.stabilized_left());
  o["stabilized_right"] = std::vector<bool>(m.stabilized_right());
  json stalks = json::array();
  for (size_t i = 0; i < g.size(); ++i) {
    if (m.dim_at(i) == 0) continue;
    stalks.push_back({{"point", g.point(i)}, {"dim", m.dim_at(i)}});
  }
  o["stalks"] = stalks;
  json maps = json::array();
  for (auto [idx, ax] : g.covering_edges()) {
    Point to = g.point(idx);
    ++to[ax];
    const exact::Matrix& mat = m.edge_map(idx, g.index(to));
    if (mat.rows() == 0 || mat.cols() == 0) continue;
    json rows = json::array();
    for (size_t r = 0; r < mat.rows(); ++r) {
      json row = json::array();
      for (size_t c = 0; c < mat.cols(); ++c) row.push_back(mat.at(r, c));
      rows.push_back(row);
    }
    maps.push_back({{"from", g.point(idx)}, {"axis", ax}, {"matrix", rows}});
  }
  o["maps"] = maps;
  return o;
}

PersistenceModule module_from_json(const json& j) {
  Point lo = j.at("box").at("lo").get<Point>();
  Point hi = j.at("box").at("hi").get<Point>();
  auto base = std::make_shared<Base>(GridPoset(lo, hi));
  uint32_t p = j.value("field", 2);
  PersistenceModule m = PersistenceModule::zero(base, p);
  const GridPoset& g = base->grid();
  if (j.contains("stabilized_left"))
    m.set_stabilized(j.at("stabilized_left").get<std::vector<bool>>(),
                     j.at("stabilized_right").get<std::vector<bool>>());
  for (const auto& s : j.at("stalks"))
    m.set_dim(g.index(s.at("point").get<Point>()), s.at("dim").get<size_t>());
  // Zero-shaped edges first, then the listed blocks.
  for (auto [idx, ax] : g.covering_edges()) {
    Point to = g.point(idx);
    ++to[ax];
    m.set_edge_map(idx, g.index(to),
                   exact::Matrix(p, m.dim_at(g.index(to)), m.dim_at(idx)));
  }
  if (j.contains("maps"))
    for (const auto& e : j.at("maps")) {
      Point from = e.at("from").get<Point>();
      size_t ax = e.at("axis").get<size_t>();
      Point to = from;
      ++to[ax];
      std::vector<std::vector<long long>> rows;
      for (const auto& r : e.at("matrix")) rows.push_back(r.get<std::vector<long long>>());
      m.set_edge_map(g.index(from), g.index(to), exact::Matrix::from_rows(p, rows));
    }
  if (!m.validate()) throw std::invalid_argument("module_from_json: functor laws violated");
  return m;
}

json distance_to_json(const DistanceResult& d) {
  json o;
  o["value"] = d.value_string();
  o["bound_only"] = d.bound_only;
  return o;
}

SimplicialComplex complex_from_json(const json& j) {
  SimplicialComplex k;
  for (const auto& s : j.at("simplices")) k.simplices.push_back(s.get<std::vector<size_t>>());
  k.validate();
  return k;
}

VertexFunction vertex_function_from_json(const json& j, size_t vertex_count) {
  VertexFunction f(vertex_count, Rat(0));
  std::vector<bool> seen(vertex_count, false);
  for (const auto& [key, value] : j.items()) {
    size_t v = std::stoull(key);
    if (v >= vertex_count) throw std::invalid_argument("vertex function: unknown vertex " + key);
    f[v] = rational_from_json(value);
    seen[v] = true;
  }
  for (size_t v = 0; v < vertex_count; ++v)
    if (!seen[v])
      throw std::invalid_argument("vertex function: missing vertex " + std::to_string(v));
  return f;
}

json stability_report_to_json(const StabilityReport& r) {
  json o;
  o["barcode_f"] = barcode_to_json(r.barcode_f);
  o["barcode_g"] = barcode_to_json(r.barcode_g);
  o["distance"] = r.distance.value_string();
  o["sup_norm"] = format_rational(r.sup_norm);
  o["holds"] = r.holds;
  return o;
}

}  // namespace pmconv
