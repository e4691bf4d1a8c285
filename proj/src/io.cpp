#include "rydsim/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rydsim::io {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open for writing: " + tmp.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      throw std::runtime_error("write failed: " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  std::ostringstream out;
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) {
      throw std::domain_error("csv_table: row width does not match header");
    }
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_double(row[i]);
    }
    out << '\n';
  }
  return out.str();
}

nlohmann::json schedule_to_json(const Schedule& schedule) {
  nlohmann::json samples = nlohmann::json::array();
  for (const ScheduleSample& s : schedule.samples) {
    samples.push_back({{"t", s.t},
                       {"f1", s.f1},
                       {"f2", s.f2},
                       {"alpha1", s.alpha1},
                       {"alpha2", s.alpha2}});
  }
  return {{"samples", samples}};
}

Schedule schedule_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("samples") || !j["samples"].is_array()) {
    throw std::domain_error("schedule JSON must be {\"samples\": [...]}");
  }
  Schedule schedule;
  for (const auto& s : j["samples"]) {
    schedule.samples.push_back({s.at("t").get<double>(),
                                s.at("f1").get<double>(),
                                s.at("f2").get<double>(),
                                s.at("alpha1").get<double>(),
                                s.at("alpha2").get<double>()});
  }
  schedule.validate();
  return schedule;
}

namespace {

Schedule schedule_from_csv_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::domain_error("schedule CSV is empty");
  }
  Schedule schedule;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    ScheduleSample s{};
    char sep = ',';
    if (!(row >> s.t >> sep >> s.f1 >> sep >> s.f2 >> sep >> s.alpha1 >> sep >>
          s.alpha2)) {
      throw std::domain_error("schedule CSV row is not 5 numeric columns: " +
                              line);
    }
    schedule.samples.push_back(s);
  }
  schedule.validate();
  return schedule;
}

}  // namespace

Schedule load_schedule(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::domain_error("cannot open schedule file: " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  if (path.extension() == ".json") {
    return schedule_from_json(nlohmann::json::parse(buf.str()));
  }
  return schedule_from_csv_text(buf.str());
}

std::string schedule_csv(const Schedule& schedule) {
  std::vector<std::vector<double>> rows;
  rows.reserve(schedule.samples.size());
  for (const ScheduleSample& s : schedule.samples) {
    rows.push_back({s.t, s.f1, s.f2, s.alpha1, s.alpha2});
  }
  return csv_table({"t[1/Omega_JC]", "f1[1]", "f2[1]", "alpha1[1]", "alpha2[1]"},
                   rows);
}

nlohmann::json state_to_json(const StateVector& state) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (int i = 0; i < state.dim(); ++i) {
    re.push_back(state.amplitudes()(i).real());
    im.push_back(state.amplitudes()(i).imag());
  }
  return {{"dim", state.dim()}, {"real", re}, {"imag", im}};
}

nlohmann::json report_to_json(const ProtocolReport& report,
                              const std::string& protocol, int atoms,
                              const nlohmann::json& options) {
  nlohmann::json metrics = nlohmann::json::object();
  for (const auto& [key, value] : report.metrics) metrics[key] = value;
  nlohmann::json trajectory = nlohmann::json::array();
  for (const TrajectoryMetrics& m : report.trajectory) {
    trajectory.push_back({m.t, m.s_value, m.leakage, m.energy_mean,
                          m.energy_extremal, m.rydberg_population});
  }
  nlohmann::json views = nlohmann::json::object();
  for (const auto& [name, state] : report.views) {
    views[name] = state_to_json(state);
  }
  return {{"protocol", protocol},
          {"atoms", atoms},
          {"options", options},
          {"metrics", metrics},
          {"trajectory_columns",
           {"t[1/Omega_JC]", "s[1]", "leakage[1]", "energy_mean[Omega_JC]",
            "energy_extremal[Omega_JC]", "rydberg_population[1]"}},
          {"trajectory", trajectory},
          {"final_state", state_to_json(report.final_state)},
          {"views", views}};
}

}  // namespace rydsim::io
