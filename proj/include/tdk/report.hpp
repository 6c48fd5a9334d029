#pragma once

// Check reports shared by the command-line tool. A report is a list of named
// checks, each with a status and a witness value. Reports are rendered twice,
// as canonical JSON and as a plain-text table, and the bytes are a
// deterministic function of the inputs: checks are sorted by name (never by
// completion time) and timings are zeroed unless explicitly requested.

#include <tdk/json_io.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace tdk {

struct Check {
  std::string name;
  std::string status;  // pass | fail | infeasible | measured
  Json witness = Json(nullptr);
  double time_ms = 0;
};

struct Report {
  std::string scenario;
  std::string kind;
  std::uint64_t seed = 0;
  bool timing = false;
  std::vector<Check> checks;

  void add(std::string name, std::string status, Json witness = Json(nullptr),
           double time_ms = 0) {
    if (status != "pass" && status != "fail" && status != "infeasible" &&
        status != "measured")
      throw std::logic_error("bad check status: " + status);
    checks.push_back(
        {std::move(name), std::move(status), std::move(witness), timing ? time_ms : 0});
  }

  std::size_t count(const std::string& status) const {
    std::size_t n = 0;
    for (const Check& c : checks) n += c.status == status;
    return n;
  }

  /// every failed check still carries its witness; only "fail" is an error
  int exit_code() const { return count("fail") ? 1 : 0; }

  void sort_by_name() {
    std::stable_sort(checks.begin(), checks.end(),
                     [](const Check& a, const Check& b) { return a.name < b.name; });
  }

  Json to_json() const {
    Json j;
    j["schema"] = kSchemaTag;
    j["scenario"] = scenario;
    j["kind"] = kind;
    j["seed"] = seed;
    Json list = Json::array();
    for (const Check& c : checks) {
      Json e;
      e["name"] = c.name;
      e["status"] = c.status;
      e["witness"] = c.witness;
      e["time_ms"] = c.time_ms;
      list.push_back(std::move(e));
    }
    j["checks"] = std::move(list);
    Json summary;
    summary["total"] = checks.size();
    summary["pass"] = count("pass");
    summary["fail"] = count("fail");
    summary["infeasible"] = count("infeasible");
    summary["measured"] = count("measured");
    j["summary"] = std::move(summary);
    return j;
  }

  std::string to_text() const {
    std::ostringstream out;
    out << "scenario " << scenario << " (" << kind << "), seed " << seed << "\n";
    std::size_t width = 4;
    for (const Check& c : checks) width = std::max(width, c.name.size());
    for (const Check& c : checks) {
      std::string tag = c.status;
      for (char& ch : tag) ch = char(std::toupper(static_cast<unsigned char>(ch)));
      out << std::left << std::setw(11) << tag << std::setw(int(width) + 2) << c.name;
      if (!c.witness.is_null()) out << " " << c.witness.dump();
      out << "\n";
    }
    out << checks.size() << " checks: " << count("pass") << " pass, " << count("fail")
        << " fail, " << count("infeasible") << " infeasible, " << count("measured")
        << " measured\n";
    return out.str();
  }
};

/// Writes <scenario>.report.json and <scenario>.report.txt. The directory is
/// the current one unless TDK_REPORT_DIR is set; an explicit path wins over
/// both. Returns the JSON path.
inline std::filesystem::path write_report(const Report& report,
                                          const std::string& out_path = "") {
  std::filesystem::path json_path;
  if (!out_path.empty()) {
    json_path = out_path;
  } else {
    std::filesystem::path dir = ".";
    if (const char* env = std::getenv("TDK_REPORT_DIR"); env && *env) dir = env;
    json_path = dir / (report.scenario + ".report.json");
  }
  std::filesystem::path txt_path = json_path;
  if (txt_path.extension() == ".json")
    txt_path.replace_extension(".txt");
  else
    txt_path += ".txt";
  if (json_path.has_parent_path())
    std::filesystem::create_directories(json_path.parent_path());
  std::ofstream(json_path) << dump_json(report.to_json());
  std::ofstream(txt_path) << report.to_text();
  return json_path;
}

}  // namespace tdk
