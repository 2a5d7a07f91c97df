#include "lpcond/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "lpcond/errors.hpp"

namespace lpcond {

void KahanSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::fabs(sum_) >= std::fabs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

double Pmf::at(std::int64_t value) const {
  auto it = std::lower_bound(support.begin(), support.end(), value);
  if (it == support.end() || *it != value) return 0.0;
  return probs[static_cast<std::size_t>(it - support.begin())];
}

double Pmf::total_mass() const {
  KahanSum s;
  for (double p : probs) s.add(p);
  return s.value();
}

double Pmf::mean() const {
  KahanSum s;
  for (std::size_t i = 0; i < size(); ++i) s.add(static_cast<double>(support[i]) * probs[i]);
  return s.value() / total_mass();
}

double Pmf::variance() const {
  const double mu = mean();
  KahanSum s;
  for (std::size_t i = 0; i < size(); ++i) {
    const double d = static_cast<double>(support[i]) - mu;
    s.add(d * d * probs[i]);
  }
  return s.value() / total_mass();
}

Pmf Pmf::from_dense(std::int64_t offset, const std::vector<double>& dense,
                    double truncation_mass) {
  Pmf out;
  out.truncation_mass = truncation_mass;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) {
      out.support.push_back(offset + static_cast<std::int64_t>(i));
      out.probs.push_back(dense[i]);
    }
  }
  return out;
}

std::vector<double> Pmf::to_dense() const {
  if (empty()) return {};
  std::vector<double> dense(static_cast<std::size_t>(max_value() - min_value() + 1), 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    dense[static_cast<std::size_t>(support[i] - min_value())] = probs[i];
  }
  return dense;
}

Pmf Pmf::point(std::int64_t value) {
  Pmf out;
  out.support = {value};
  out.probs = {1.0};
  return out;
}

Pmf Pmf::normalized() const {
  Pmf out = *this;
  const double z = total_mass();
  for (double& p : out.probs) p /= z;
  out.truncation_mass = 0.0;
  return out;
}

double total_variation(const Pmf& p, const Pmf& q) {
  std::size_t i = 0, j = 0;
  KahanSum s;
  while (i < p.size() || j < q.size()) {
    if (j == q.size() || (i < p.size() && p.support[i] < q.support[j])) {
      s.add(std::fabs(p.probs[i++]));
    } else if (i == p.size() || q.support[j] < p.support[i]) {
      s.add(std::fabs(q.probs[j++]));
    } else {
      s.add(std::fabs(p.probs[i++] - q.probs[j++]));
    }
  }
  return 0.5 * s.value();
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_pmf_csv(std::ostream& out, const Pmf& pmf) {
  out << "value,prob\n";
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    out << pmf.support[i] << ',' << format_double(pmf.probs[i]) << '\n';
  }
  out << "# truncation_mass=" << format_double(pmf.truncation_mass) << '\n';
}

std::string pmf_to_csv(const Pmf& pmf) {
  std::ostringstream os;
  write_pmf_csv(os, pmf);
  return os.str();
}

Pmf read_pmf_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "value,prob") {
    throw InputError("pmf csv: missing 'value,prob' header");
  }
  std::map<std::int64_t, double> rows;
  Pmf out;
  bool footer = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# truncation_mass=", 0) == 0) {
      out.truncation_mass = std::stod(line.substr(18));
      footer = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InputError("pmf csv: malformed row '" + line + "'");
    try {
      const auto value = std::stoll(line.substr(0, comma));
      const double prob = std::stod(line.substr(comma + 1));
      if (!rows.emplace(value, prob).second) throw InputError("pmf csv: duplicate value");
    } catch (const std::logic_error&) {
      throw InputError("pmf csv: malformed row '" + line + "'");
    }
  }
  if (!footer) throw InputError("pmf csv: missing truncation_mass footer");
  for (const auto& [v, p] : rows) {
    out.support.push_back(v);
    out.probs.push_back(p);
  }
  return out;
}

}  // namespace lpcond
