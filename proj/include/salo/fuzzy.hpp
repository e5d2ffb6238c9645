#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace salo::fuzzy {

// Piecewise-linear membership function. Triangle(a,b,c) is stored as
// trapezoid(a,b,b,c); degenerate ramps (a==b or c==d) evaluate to 1 at the
// shoulder.
struct FuzzySet {
  std::string name;
  double a, b, c, d;

  static FuzzySet triangle(std::string name, double a, double b, double c);
  static FuzzySet trapezoid(std::string name, double a, double b, double c, double d);

  double membership(double x) const;
};

struct Universe {
  std::string name;
  double lo, hi;
  std::vector<FuzzySet> sets;
  int grid_n = 1001;  // defuzzification grid

  const FuzzySet& find(const std::string& set_name) const;
  // Throws unless every sampled point is covered by some set.
  void check_coverage(int samples = 10001) const;
};

struct Rule {
  std::string loss_set;
  std::string iter_set;
  std::string lr_set;
  std::string b1_set;
  std::string b3_set;
};

struct FuzzyOutput {
  double lr;
  double beta1;
  double beta3;
};

class FuzzySystem {
 public:
  FuzzySystem(Universe loss, Universe iter, Universe lr, Universe b1, Universe b3,
              std::vector<Rule> rules);

  // Mamdani inference: min activation, max aggregation, centroid defuzzification.
  FuzzyOutput infer(double loss, double iter_frac) const;

  const Universe& loss_universe() const { return loss_; }
  const Universe& iter_universe() const { return iter_; }
  const Universe& lr_universe() const { return lr_; }
  const Universe& b1_universe() const { return b1_; }
  const Universe& b3_universe() const { return b3_; }
  const std::vector<Rule>& rules() const { return rules_; }

 private:
  Universe loss_, iter_, lr_, b1_, b3_;
  std::vector<Rule> rules_;
};

// Centroid of an aggregate membership function sampled on the universe's
// uniform grid: sum(x_i mu_i) / sum(mu_i). Throws on zero total mass.
double centroid(const std::vector<double>& aggregate, const Universe& u);

struct LookupTable {
  std::vector<double> loss_grid;
  std::vector<double> iter_grid;
  std::vector<std::array<double, 3>> values;  // row-major (loss x iter), (lr, b1, b3)

  const std::array<double, 3>& at(std::size_t i, std::size_t j) const {
    return values[i * iter_grid.size() + j];
  }
};

LookupTable build_lookup_table(const FuzzySystem& sys, std::size_t loss_grid_n,
                               std::size_t iter_grid_n);

// Bilinear interpolation; queries outside the grid clamp to the edge.
FuzzyOutput lookup(const LookupTable& table, double loss, double iter_frac);

// Default scheduler system: plateau cores follow the published variable
// ranges; ramps are widened and stacked under neighbor cores so the maximum
// membership stays 1 across every universe.
FuzzySystem default_system();

// Rule file format, one rule per line:
//   IF loss IS <set> AND iter IS <set> THEN lr IS <set>, b1 IS <set>, b3 IS <set>
std::vector<Rule> parse_rules(std::istream& in);
std::vector<Rule> load_rules_file(const std::string& path);
FuzzySystem default_system_with_rules(std::vector<Rule> rules);

// CSV export with header loss,iter_frac,lr,beta1,beta3.
void write_lookup_csv(const LookupTable& table, std::ostream& out);

}  // namespace salo::fuzzy
