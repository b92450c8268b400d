#include "pathlaw/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace pathlaw {

namespace {

std::string num17(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

void spec_json(std::ostringstream& os, const ExperimentSpec& s) {
  os << "{\"id\":\"" << to_string(s.id) << "\""
     << ",\"t_horizon\":" << num17(s.t_horizon)
     << ",\"n_steps\":" << s.n_steps << ",\"n_paths\":" << s.n_paths
     << ",\"mu\":" << num17(s.mu) << ",\"x\":" << num17(s.x)
     << ",\"alpha_or_x_weight\":" << num17(s.alpha_or_x_weight)
     << ",\"u_extension\":" << num17(s.u_extension)
     << ",\"truncation_T\":" << num17(s.truncation_T)
     << ",\"marginal_times\":[";
  for (std::size_t i = 0; i < s.marginal_times.size(); ++i) {
    if (i) os << ',';
    os << num17(s.marginal_times[i]);
  }
  os << "],\"seed\":" << s.seed
     << ",\"family_alpha\":" << num17(s.family_alpha) << "}";
}

void test_json(std::ostringstream& os, const TestReport& t) {
  os << "{\"test_name\":\"" << json_escape(t.test_name) << "\""
     << ",\"statistic\":" << num17(t.statistic);
  if (t.p_value) os << ",\"p_value\":" << num17(*t.p_value);
  os << ",\"n_lhs\":" << t.n_lhs << ",\"n_rhs\":" << t.n_rhs
     << ",\"pass\":" << (t.pass ? "true" : "false")
     << ",\"threshold\":" << num17(t.threshold) << ",\"details\":{";
  for (std::size_t i = 0; i < t.details.size(); ++i) {
    if (i) os << ',';
    os << '"' << json_escape(t.details[i].first) << "\":\""
       << json_escape(t.details[i].second) << '"';
  }
  os << "}}";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string to_json(const ExperimentReport& report) {
  std::ostringstream os;
  os << "{\"spec\":";
  spec_json(os, report.spec);
  os << ",\"tests\":[";
  for (std::size_t i = 0; i < report.tests.size(); ++i) {
    if (i) os << ',';
    test_json(os, report.tests[i]);
  }
  os << "],\"overall_pass\":" << (report.overall_pass ? "true" : "false")
     << ",\"wall_time_s\":" << num17(report.wall_time_s) << "}\n";
  return os.str();
}

std::string reports_csv(const std::vector<ExperimentReport>& reports) {
  std::ostringstream os;
  os << "experiment,test_name,statistic,p_value,n_lhs,n_rhs,pass,threshold,"
        "details\r\n";
  for (const ExperimentReport& rep : reports) {
    for (const TestReport& t : rep.tests) {
      std::string details;
      for (std::size_t i = 0; i < t.details.size(); ++i) {
        if (i) details += ';';
        details += t.details[i].first + '=' + t.details[i].second;
      }
      os << to_string(rep.spec.id) << ',' << csv_field(t.test_name) << ','
         << num17(t.statistic) << ','
         << (t.p_value ? num17(*t.p_value) : std::string()) << ',' << t.n_lhs
         << ',' << t.n_rhs << ',' << (t.pass ? "true" : "false") << ','
         << num17(t.threshold) << ',' << csv_field(details) << "\r\n";
    }
  }
  return os.str();
}

std::string suite_summary_json(const std::vector<ExperimentReport>& reports,
                               std::uint64_t seed,
                               const std::string& build_id) {
  bool all = true;
  for (const ExperimentReport& r : reports) all &= r.overall_pass;
  std::ostringstream os;
  os << "{\"build_id\":\"" << json_escape(build_id) << "\",\"seed\":" << seed
     << ",\"overall_pass\":" << (all ? "true" : "false")
     << ",\"experiments\":[";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i) os << ',';
    os << "{\"id\":\"" << to_string(reports[i].spec.id) << "\""
       << ",\"overall_pass\":" << (reports[i].overall_pass ? "true" : "false")
       << ",\"wall_time_s\":" << num17(reports[i].wall_time_s)
       << ",\"spec\":";
    spec_json(os, reports[i].spec);
    os << "}";
  }
  os << "]}\n";
  return os.str();
}

std::string suite_summary_csv(const std::vector<ExperimentReport>& reports,
                              std::uint64_t seed,
                              const std::string& build_id) {
  std::ostringstream os;
  os << "build_id,seed,experiment,overall_pass,wall_time_s\r\n";
  for (const ExperimentReport& r : reports)
    os << csv_field(build_id) << ',' << seed << ',' << to_string(r.spec.id)
       << ',' << (r.overall_pass ? "true" : "false") << ','
       << num17(r.wall_time_s) << "\r\n";
  return os.str();
}

}  // namespace pathlaw
