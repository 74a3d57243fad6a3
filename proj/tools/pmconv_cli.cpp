// Command-line front end: barcode convolution, distances, closed-form vs
// grid verification, stability reports and adjunction checks, all JSON in
// and out. Exit codes: 0 success, 1 verification failure, 2 bad input.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "pmconv/json_io.hpp"
#include "pmconv/randgen.hpp"

using namespace pmconv;

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  json j;
  in >> j;
  return j;
}

struct WindowSpec {
  long long lo{-2}, hi{22};
};

GridPoset window_box(const WindowSpec& w) {
  return GridPoset({static_cast<int>(w.lo)}, {static_cast<int>(w.hi)});
}

bool integral_barcode(const Barcode& b) {
  for (const auto& [bar, mult] : b.bars()) {
    if (bar.left.is_finite() && bar.left.value.denominator() != 1) return false;
    if (bar.right.is_finite() && bar.right.value.denominator() != 1) return false;
  }
  return true;
}

// Closed forms when available, otherwise the grid pipeline for integral
// endpoint data (singletons and closed right ends land here).
GradedBarcode convolve_with_fallback(const Barcode& a, const Barcode& b, ConvolveMode mode,
                                     bool derived, uint32_t p) {
  try {
    return convolve_barcodes(a, b, mode, derived);
  } catch (const UnsupportedIntervalCase&) {
    if (!integral_barcode(a) || !integral_barcode(b))
      throw std::invalid_argument(
          "no closed form for these endpoint shapes and the grid fallback needs integer "
          "endpoints");
  }
  long long span = 1;
  for (const Barcode* bc : {&a, &b})
    for (const auto& [bar, mult] : bc->bars()) {
      if (bar.left.is_finite()) span = std::max(span, std::llabs(bar.left.value.numerator()));
      if (bar.right.is_finite()) span = std::max(span, std::llabs(bar.right.value.numerator()));
    }
  auto base = std::make_shared<Base>(
      GridPoset({static_cast<int>(-span - 2)}, {static_cast<int>(2 * span + 2)}));
  GridPoset w({static_cast<int>(-2 * span - 1)}, {static_cast<int>(2 * span + 2)});
  auto ma = realize_barcode(a, base, p);
  auto mb = realize_barcode(b, base, p);
  if (derived) {
    auto graded = mode == ConvolveMode::Sheaf ? derived_sheaf_convolve(ma, mb, w)
                                              : derived_cosheaf_convolve(ma, mb, w);
    return barcodes_of(graded);
  }
  auto conv = mode == ConvolveMode::Sheaf ? sheaf_convolve_oracle(ma, mb, w)
                                          : cosheaf_convolve_oracle(ma, mb, w);
  GradedBarcode out;
  out.set(0, barcode_extract(conv));
  return out;
}

int run_convolve(const std::string& a_path, const std::string& b_path, bool sheaf, bool derived,
                 uint32_t p) {
  Barcode a = barcode_from_json(read_json_file(a_path));
  Barcode b = barcode_from_json(read_json_file(b_path));
  GradedBarcode out = convolve_with_fallback(
      a, b, sheaf ? ConvolveMode::Sheaf : ConvolveMode::Cosheaf, derived, p);
  std::cout << graded_barcode_to_json(out).dump(2) << "\n";
  return 0;
}

int run_distance(const std::string& a_path, const std::string& b_path) {
  GradedBarcode a = graded_barcode_from_json(read_json_file(a_path));
  GradedBarcode b = graded_barcode_from_json(read_json_file(b_path));
  DistanceResult d = convolution_distance(a, b);
  std::cout << distance_to_json(d).dump(2) << "\n";
  return 0;
}

int run_oracle(uint64_t seed, size_t trials, uint32_t p, const WindowSpec& wspec, bool derived) {
  Rng rng(seed);
  auto base = std::make_shared<Base>(window_box(wspec));
  GridPoset w = window_box(wspec);
  size_t pass = 0;
  json failures = json::array();
  for (size_t t = 0; t < trials; ++t) {
    Interval i = random_half_open(rng, 0, 10);
    Interval j = random_half_open(rng, 0, 10);
    auto m = discretize_interval(i, base, p);
    auto n = discretize_interval(j, base, p);
    bool ok;
    json detail;
    if (derived) {
      GradedBarcode sheaf_grid = barcodes_of(derived_sheaf_convolve(m, n, w));
      GradedBarcode cosheaf_grid = barcodes_of(derived_cosheaf_convolve(m, n, w));
      GradedBarcode sheaf_formula = sheaf_convolve_derived(i, j);
      GradedBarcode cosheaf_formula = cosheaf_convolve_derived(i, j);
      ok = sheaf_grid == sheaf_formula && cosheaf_grid == cosheaf_formula;
      if (!ok)
        detail = {{"sheaf_grid", graded_barcode_to_json(sheaf_grid)},
                  {"sheaf_formula", graded_barcode_to_json(sheaf_formula)},
                  {"cosheaf_grid", graded_barcode_to_json(cosheaf_grid)},
                  {"cosheaf_formula", graded_barcode_to_json(cosheaf_formula)}};
    } else {
      Barcode sheaf_grid = barcode_extract(sheaf_convolve_oracle(m, n, w));
      Barcode cosheaf_grid = barcode_extract(cosheaf_convolve_oracle(m, n, w));
      ok = sheaf_grid == sheaf_convolve_underived(i, j) &&
           cosheaf_grid == cosheaf_convolve_underived(i, j);
      if (!ok)
        detail = {{"sheaf_grid", barcode_to_json(sheaf_grid)},
                  {"cosheaf_grid", barcode_to_json(cosheaf_grid)}};
    }
    if (ok) {
      ++pass;
    } else {
      failures.push_back({{"trial", t},
                          {"first", Barcode({{i, 1}}).to_string()},
                          {"second", Barcode({{j, 1}}).to_string()},
                          {"detail", detail}});
    }
  }
  json out{{"pass", pass}, {"fail", trials - pass}};
  if (!failures.empty()) out["failures"] = failures;
  std::cout << out.dump(2) << "\n";
  return pass == trials ? 0 : 1;
}

int run_stability(const std::string& complex_path, const std::string& f_path,
                  const std::string& g_path, size_t degree, uint32_t p) {
  SimplicialComplex k = complex_from_json(read_json_file(complex_path));
  VertexFunction f = vertex_function_from_json(read_json_file(f_path), k.vertex_count());
  VertexFunction g = vertex_function_from_json(read_json_file(g_path), k.vertex_count());
  StabilityReport rep = stability_check(k, f, g, degree, p);
  std::cout << stability_report_to_json(rep).dump(2) << "\n";
  return rep.holds ? 0 : 1;
}

int run_adjunction(uint64_t seed, size_t trials, uint32_t p) {
  Rng rng(seed);
  size_t pass = 0;
  json failures = json::array();
  for (size_t t = 0; t < trials; ++t) {
    bool ok = true;
    {
      // Direct image adjunctions along a random monotone map.
      auto src = std::make_shared<Base>(GridPoset({0, 0}, {2, 1}));
      auto tgt = std::make_shared<Base>(GridPoset({0, 0}, {1, 2}));
      MonotoneMap f = random_monotone_map(rng, src, tgt);
      auto fm = random_module(rng, src, p, 2, t % 2 == 0);
      auto gm = random_module(rng, tgt, p, 2, t % 3 == 0);
      ok &= hom_space(inverse_image(f, gm), fm) == hom_space(gm, direct_image_sheaf(f, fm));
      ok &= hom_space(direct_image_cosheaf(f, fm), gm) == hom_space(fm, inverse_image(f, gm));
    }
    {
      // Tensor-hom adjunction on a one-parameter box, both argument orders.
      auto base = std::make_shared<Base>(GridPoset({-1}, {4}));
      GridPoset w({-1}, {4});
      auto m = random_module(rng, base, p, 2, false);
      auto n = random_module(rng, base, p, 2, false);
      auto pp = random_module(rng, base, p, 2, t % 2 == 1);
      auto tensor = cosheaf_convolve_oracle(m, n, w);
      ok &= hom_space(tensor, pp) == hom_space(m, internal_hom(n, pp));
      ok &= hom_space(tensor, pp) == hom_space(n, internal_hom(m, pp));
    }
    if (ok)
      ++pass;
    else
      failures.push_back({{"trial", t}});
  }
  json out{{"pass", pass}, {"fail", trials - pass}};
  if (!failures.empty()) out["failures"] = failures;
  std::cout << out.dump(2) << "\n";
  return pass == trials ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"convolutions, distances and stability checks for persistence modules"};
  app.require_subcommand(1);

  bool sheaf = false, cosheaf = false, derived = false;
  uint32_t field = 2;
  uint64_t seed = 0;
  size_t trials = 50, degree = 0;
  std::string window_arg = "-2,22";
  std::string a_path, b_path, complex_path, f_path, g_path;

  auto add_mode = [&](CLI::App* cmd) {
    cmd->add_flag("--sheaf", sheaf, "sheaf convolution (limits)");
    cmd->add_flag("--cosheaf", cosheaf, "cosheaf convolution (colimits)");
  };

  CLI::App* conv = app.add_subcommand("convolve", "convolve two barcode files");
  add_mode(conv);
  conv->add_flag("--derived", derived, "emit the full graded result");
  conv->add_option("--field", field, "prime field order");
  conv->add_option("a", a_path, "first barcode JSON")->required();
  conv->add_option("b", b_path, "second barcode JSON")->required();

  CLI::App* dist = app.add_subcommand("distance", "convolution distance of graded barcodes");
  dist->add_option("a", a_path, "first (graded) barcode JSON")->required();
  dist->add_option("b", b_path, "second (graded) barcode JSON")->required();

  CLI::App* oracle = app.add_subcommand("oracle", "closed forms vs the grid pipeline");
  oracle->add_option("--seed", seed, "random seed");
  oracle->add_option("--trials", trials, "number of random pairs");
  oracle->add_option("--field", field, "prime field order");
  oracle->add_option("--window", window_arg, "window as lo,hi");
  bool oracle_underived = false;
  oracle->add_flag("--underived", oracle_underived, "compare degree 0 only");

  CLI::App* stab = app.add_subcommand("stability", "sublevel persistence stability report");
  stab->add_option("--complex", complex_path, "simplicial complex JSON")->required();
  stab->add_option("--f", f_path, "first vertex function JSON")->required();
  stab->add_option("--g", g_path, "second vertex function JSON")->required();
  stab->add_option("--degree", degree, "homology degree");
  stab->add_option("--field", field, "prime field order");

  CLI::App* adj = app.add_subcommand("adjunction-check", "random adjunction dimension checks");
  adj->add_option("--seed", seed, "random seed");
  adj->add_option("--trials", trials, "number of random instances");
  adj->add_option("--field", field, "prime field order");

  CLI11_PARSE(app, argc, argv);

  try {
    if (conv->parsed()) {
      if (sheaf == cosheaf) throw std::invalid_argument("pick exactly one of --sheaf/--cosheaf");
      return run_convolve(a_path, b_path, sheaf, derived, field);
    }
    if (dist->parsed()) return run_distance(a_path, b_path);
    if (oracle->parsed()) {
      WindowSpec w;
      auto comma = window_arg.find(',');
      if (comma == std::string::npos) throw std::invalid_argument("--window wants lo,hi");
      w.lo = std::stoll(window_arg.substr(0, comma));
      w.hi = std::stoll(window_arg.substr(comma + 1));
      return run_oracle(seed, trials, field, w, !oracle_underived);
    }
    if (stab->parsed()) return run_stability(complex_path, f_path, g_path, degree, field);
    if (adj->parsed()) return run_adjunction(seed, trials, field);
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
