#include "mcloss/report.hpp"

#include <charconv>
#include <sstream>

namespace mcloss {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string reports_csv(const std::vector<BoundReport>& reports) {
  std::ostringstream os;
  os << "bound_id,m,samples,worst_slack,worst_lhs,worst_rhs,violations,witness_layout,witness\n";
  for (const auto& r : reports) {
    os << r.bound_id << ',' << r.m << ',' << r.samples << ',' << format_double(r.worst_slack) << ','
       << format_double(r.worst_lhs) << ',' << format_double(r.worst_rhs) << ',' << r.violations << ','
       << r.witness_layout << ',';
    for (std::size_t i = 0; i < r.witness.size(); ++i) os << (i ? ";" : "") << format_double(r.witness[i]);
    os << '\n';
  }
  return os.str();
}

nlohmann::json report_to_json(const BoundReport& r) {
  auto num = [](double x) -> nlohmann::json {
    if (std::isfinite(x)) return x;
    return format_double(x);
  };
  nlohmann::json w = nlohmann::json::array();
  for (double x : r.witness) w.push_back(num(x));
  return {{"bound_id", r.bound_id},     {"m", r.m},
          {"samples", r.samples},       {"worst_slack", num(r.worst_slack)},
          {"worst_lhs", num(r.worst_lhs)}, {"worst_rhs", num(r.worst_rhs)},
          {"violations", r.violations}, {"passed", r.passed()},
          {"wall_time_s", r.wall_time_s}, {"witness_layout", r.witness_layout},
          {"witness", w}};
}

std::string curve_csv(const std::vector<CurvePoint>& points) {
  std::ostringstream os;
  os << "bound_id,x,lhs,rhs,slack\n";
  for (const auto& p : points) {
    os << p.bound_id << ',' << format_double(p.x) << ',' << format_double(p.lhs) << ','
       << format_double(p.rhs) << ',' << format_double(p.rhs - p.lhs) << '\n';
  }
  return os.str();
}

}  // namespace mcloss
