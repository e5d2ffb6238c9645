#include "salo/fuzzy.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace salo::fuzzy {

FuzzySet FuzzySet::triangle(std::string name, double a, double b, double c) {
  return trapezoid(std::move(name), a, b, b, c);
}

FuzzySet FuzzySet::trapezoid(std::string name, double a, double b, double c, double d) {
  if (!(a <= b && b <= c && c <= d)) {
    throw std::invalid_argument("fuzzy set '" + name + "': breakpoints must be ordered");
  }
  return FuzzySet{std::move(name), a, b, c, d};
}

double FuzzySet::membership(double x) const {
  if (x < a || x > d) return 0.0;
  if (x < b) return (x - a) / (b - a);
  if (x <= c) return 1.0;
  return d == c ? 1.0 : (d - x) / (d - c);
}

const FuzzySet& Universe::find(const std::string& set_name) const {
  for (const auto& s : sets) {
    if (s.name == set_name) return s;
  }
  throw std::invalid_argument("universe '" + name + "': no set named '" + set_name + "'");
}

void Universe::check_coverage(int samples) const {
  for (int k = 0; k < samples; ++k) {
    const double x = lo + (hi - lo) * k / (samples - 1);
    double mx = 0.0;
    for (const auto& s : sets) mx = std::max(mx, s.membership(x));
    if (!(mx > 0.0)) {
      throw std::runtime_error("universe '" + name + "': uncovered point x=" + std::to_string(x));
    }
  }
}

FuzzySystem::FuzzySystem(Universe loss, Universe iter, Universe lr, Universe b1, Universe b3,
                         std::vector<Rule> rules)
    : loss_(std::move(loss)),
      iter_(std::move(iter)),
      lr_(std::move(lr)),
      b1_(std::move(b1)),
      b3_(std::move(b3)),
      rules_(std::move(rules)) {
  for (const auto& u : {loss_, iter_, lr_, b1_, b3_}) {
    if (!(u.lo < u.hi)) throw std::invalid_argument("universe '" + u.name + "': lo must be < hi");
    if (u.grid_n < 2) throw std::invalid_argument("universe '" + u.name + "': grid_n must be >= 2");
    for (const auto& s : u.sets) {
      if (s.a < u.lo || s.d > u.hi) {
        throw std::invalid_argument("universe '" + u.name + "': set '" + s.name +
                                    "' outside bounds");
      }
    }
    u.check_coverage();
  }
  if (rules_.empty()) throw std::invalid_argument("fuzzy system: empty rule base");
  for (const auto& r : rules_) {
    loss_.find(r.loss_set);
    iter_.find(r.iter_set);
    lr_.find(r.lr_set);
    b1_.find(r.b1_set);
    b3_.find(r.b3_set);
  }
}

double centroid(const std::vector<double>& aggregate, const Universe& u) {
  if (aggregate.size() != static_cast<std::size_t>(u.grid_n)) {
    throw std::invalid_argument("centroid: aggregate size must match universe grid");
  }
  double num = 0.0, den = 0.0;
  for (int k = 0; k < u.grid_n; ++k) {
    const double x = u.lo + (u.hi - u.lo) * k / (u.grid_n - 1);
    num += x * aggregate[static_cast<std::size_t>(k)];
    den += aggregate[static_cast<std::size_t>(k)];
  }
  if (!(den > 0.0)) {
    throw std::runtime_error("centroid: zero total mass on universe '" + u.name + "'");
  }
  return num / den;
}

FuzzyOutput FuzzySystem::infer(double loss, double iter_frac) const {
  loss = std::clamp(loss, loss_.lo, loss_.hi);
  iter_frac = std::clamp(iter_frac, iter_.lo, iter_.hi);

  std::vector<double> activation(rules_.size());
  for (std::size_t r = 0; r < rules_.size(); ++r) {
    activation[r] = std::min(loss_.find(rules_[r].loss_set).membership(loss),
                             iter_.find(rules_[r].iter_set).membership(iter_frac));
  }

  auto defuzz = [&](const Universe& u, auto consequent_of) {
    std::vector<double> agg(static_cast<std::size_t>(u.grid_n), 0.0);
    for (std::size_t r = 0; r < rules_.size(); ++r) {
      if (activation[r] <= 0.0) continue;
      const FuzzySet& s = u.find(consequent_of(rules_[r]));
      for (int k = 0; k < u.grid_n; ++k) {
        const double x = u.lo + (u.hi - u.lo) * k / (u.grid_n - 1);
        agg[static_cast<std::size_t>(k)] = std::max(
            agg[static_cast<std::size_t>(k)], std::min(activation[r], s.membership(x)));
      }
    }
    return centroid(agg, u);
  };

  return {defuzz(lr_, [](const Rule& r) { return r.lr_set; }),
          defuzz(b1_, [](const Rule& r) { return r.b1_set; }),
          defuzz(b3_, [](const Rule& r) { return r.b3_set; })};
}

LookupTable build_lookup_table(const FuzzySystem& sys, std::size_t loss_grid_n,
                               std::size_t iter_grid_n) {
  if (loss_grid_n < 2 || iter_grid_n < 2) {
    throw std::invalid_argument("build_lookup_table: grid counts must be >= 2");
  }
  LookupTable t;
  const auto& lu = sys.loss_universe();
  const auto& iu = sys.iter_universe();
  t.loss_grid.resize(loss_grid_n);
  t.iter_grid.resize(iter_grid_n);
  for (std::size_t i = 0; i < loss_grid_n; ++i) {
    t.loss_grid[i] = lu.lo + (lu.hi - lu.lo) * static_cast<double>(i) /
                                 static_cast<double>(loss_grid_n - 1);
  }
  for (std::size_t j = 0; j < iter_grid_n; ++j) {
    t.iter_grid[j] = iu.lo + (iu.hi - iu.lo) * static_cast<double>(j) /
                                 static_cast<double>(iter_grid_n - 1);
  }
  t.values.reserve(loss_grid_n * iter_grid_n);
  for (std::size_t i = 0; i < loss_grid_n; ++i) {
    for (std::size_t j = 0; j < iter_grid_n; ++j) {
      const FuzzyOutput o = sys.infer(t.loss_grid[i], t.iter_grid[j]);
      t.values.push_back({o.lr, o.beta1, o.beta3});
    }
  }
  return t;
}

namespace {

// Index of the cell containing x (clamped), plus the interpolation weight.
std::pair<std::size_t, double> locate(const std::vector<double>& grid, double x) {
  x = std::clamp(x, grid.front(), grid.back());
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  std::size_t i = static_cast<std::size_t>(it - grid.begin());
  i = std::min(std::max<std::size_t>(i, 1), grid.size() - 1) - 1;
  const double t = (x - grid[i]) / (grid[i + 1] - grid[i]);
  return {i, t};
}

}  // namespace

FuzzyOutput lookup(const LookupTable& table, double loss, double iter_frac) {
  const auto [i, ti] = locate(table.loss_grid, loss);
  const auto [j, tj] = locate(table.iter_grid, iter_frac);
  FuzzyOutput out{};
  double* fields[3] = {&out.lr, &out.beta1, &out.beta3};
  for (int k = 0; k < 3; ++k) {
    *fields[k] = table.at(i, j)[static_cast<std::size_t>(k)] * (1 - ti) * (1 - tj) +
                 table.at(i + 1, j)[static_cast<std::size_t>(k)] * ti * (1 - tj) +
                 table.at(i, j + 1)[static_cast<std::size_t>(k)] * (1 - ti) * tj +
                 table.at(i + 1, j + 1)[static_cast<std::size_t>(k)] * ti * tj;
  }
  return out;
}

namespace {

Universe default_loss_universe() {
  return {"loss",
          0.0,
          6.0,
          {FuzzySet::trapezoid("Best", 0.0, 0.0, 0.6, 1.4),
           FuzzySet::trapezoid("Acceptable", 0.2, 0.6, 1.0, 2.4),
           FuzzySet::trapezoid("Medium", 0.5, 1.0, 3.0, 5.0),
           FuzzySet::trapezoid("Worst", 1.8, 3.0, 6.0, 6.0)}};
}

Universe default_iter_universe() {
  return {"iter",
          0.0,
          1.0,
          {FuzzySet::trapezoid("Initial", 0.0, 0.0, 0.2, 0.5),
           FuzzySet::trapezoid("Early", 0.02, 0.2, 0.5, 0.95),
           FuzzySet::trapezoid("Late", 0.2, 0.5, 1.0, 1.0)}};
}

Universe default_lr_universe() {
  return {"lr",
          0.0,
          1.5e-7,
          {FuzzySet::triangle("Minimum", 0.0, 0.0, 0.5e-7),
           FuzzySet::triangle("Medium", 0.0, 0.5e-7, 1e-7),
           FuzzySet::trapezoid("High", 0.5e-7, 1e-7, 1.5e-7, 1.5e-7)}};
}

Universe default_beta_universe(const std::string& name) {
  return {name,
          0.0,
          0.99,
          {FuzzySet::trapezoid("Minimum", 0.0, 0.0, 0.1, 0.3),
           FuzzySet::triangle("Medium", 0.1, 0.6, 0.9),
           FuzzySet::trapezoid("Maximum", 0.6, 0.9, 0.99, 0.99)}};
}

std::vector<Rule> default_rules() {
  const char* lr_cons[4][3] = {{"Medium", "Minimum", "Minimum"},
                               {"Medium", "Medium", "Minimum"},
                               {"High", "Medium", "Medium"},
                               {"High", "High", "Medium"}};
  const char* loss_names[4] = {"Best", "Acceptable", "Medium", "Worst"};
  const char* iter_names[3] = {"Initial", "Early", "Late"};
  const char* b1_cons[3] = {"Minimum", "Medium", "Maximum"};
  const char* b3_cons[4] = {"Maximum", "Maximum", "Medium", "Minimum"};
  std::vector<Rule> rules;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 3; ++j) {
      rules.push_back({loss_names[i], iter_names[j], lr_cons[i][j], b1_cons[j], b3_cons[i]});
    }
  }
  return rules;
}

}  // namespace

FuzzySystem default_system() { return default_system_with_rules(default_rules()); }

FuzzySystem default_system_with_rules(std::vector<Rule> rules) {
  return FuzzySystem(default_loss_universe(), default_iter_universe(), default_lr_universe(),
                     default_beta_universe("beta1"), default_beta_universe("beta3"),
                     std::move(rules));
}

namespace {

std::string upper(std::string s) {
  for (char& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

std::string strip_commas(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ','), s.end());
  return s;
}

}  // namespace

std::vector<Rule> parse_rules(std::istream& in) {
  std::vector<Rule> rules;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(strip_commas(t));
    // IF loss IS x AND iter IS y THEN lr IS a b1 IS b b3 IS c
    auto fail = [&](const std::string& why) {
      throw std::runtime_error("rules file line " + std::to_string(lineno) + ": " + why);
    };
    if (tok.size() != 18) fail("expected 18 tokens");
    const char* kw[] = {"IF", "LOSS", "IS", nullptr, "AND", "ITER", "IS", nullptr, "THEN",
                        "LR", "IS", nullptr, "B1", "IS", nullptr, "B3", "IS", nullptr};
    for (std::size_t i = 0; i < 18; ++i) {
      if (kw[i] && upper(tok[i]) != kw[i]) fail("expected '" + std::string(kw[i]) + "'");
    }
    rules.push_back({tok[3], tok[7], tok[11], tok[14], tok[17]});
  }
  return rules;
}

std::vector<Rule> load_rules_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open rules file: " + path);
  return parse_rules(in);
}

void write_lookup_csv(const LookupTable& table, std::ostream& out) {
  out << "loss,iter_frac,lr,beta1,beta3\n";
  char buf[512];
  for (std::size_t i = 0; i < table.loss_grid.size(); ++i) {
    for (std::size_t j = 0; j < table.iter_grid.size(); ++j) {
      const auto& v = table.at(i, j);
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", table.loss_grid[i],
                    table.iter_grid[j], v[0], v[1], v[2]);
      out << buf;
    }
  }
}

}  // namespace salo::fuzzy
