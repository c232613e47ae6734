#include "coverage/trajectory_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace coverage {

namespace {

void put(std::string& line, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  line += buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) return cells;
    start = comma + 1;
  }
}

double parse_cell(const std::string& cell, std::size_t row) {
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw LogFormatError("row " + std::to_string(row) + ": cannot parse '" + cell + "'");
  }
  return v;
}

}  // namespace

std::string trajectory_header(std::size_t n) {
  std::string h = "t";
  for (const char* group : {"phi_", "px_", "py_", "m_"}) {
    for (std::size_t i = 1; i <= n; ++i) h += "," + std::string(group) + std::to_string(i);
  }
  return h + ",V,J,H";
}

void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log) {
  const std::size_t n = log.agent_count;
  out << trajectory_header(n) << '\n';
  std::string line;
  for (const TrajectoryRecord& r : log.records) {
    line.clear();
    put(line, r.t);
    auto cell = [&line](double v) {
      line += ',';
      put(line, v);
    };
    for (std::size_t i = 0; i < n; ++i) cell(r.phi_unwrapped[i]);
    for (std::size_t i = 0; i < n; ++i) cell(r.p[i].x());
    for (std::size_t i = 0; i < n; ++i) cell(r.p[i].y());
    for (std::size_t i = 0; i < n; ++i) cell(r.m[i]);
    cell(r.V);
    cell(r.J);
    cell(r.H);
    out << line << '\n';
  }
}

std::string trajectory_csv(const TrajectoryLog& log) {
  std::ostringstream out;
  write_trajectory_csv(out, log);
  return out.str();
}

TrajectoryLog read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw LogFormatError("empty log");
  const std::vector<std::string> header = split(line);
  if (header.size() < 8 || (header.size() - 4) % 4 != 0) {
    throw LogFormatError("unexpected header width");
  }
  const std::size_t n = (header.size() - 4) / 4;
  if (line != trajectory_header(n)) throw LogFormatError("unexpected header: " + line);

  TrajectoryLog log;
  log.agent_count = n;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != header.size()) {
      throw LogFormatError("row " + std::to_string(row) + ": expected " +
                           std::to_string(header.size()) + " columns");
    }
    std::size_t c = 0;
    auto next = [&]() { return parse_cell(cells[c++], row); };
    TrajectoryRecord r;
    r.t = next();
    r.phi_unwrapped.resize(n);
    for (double& v : r.phi_unwrapped) v = next();
    r.phi_wrapped.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.phi_wrapped[i] = wrap_angle(r.phi_unwrapped[i]);
    r.p.assign(n, Vec2::Zero());
    for (Vec2& p : r.p) p.x() = next();
    for (Vec2& p : r.p) p.y() = next();
    r.m.resize(n);
    for (double& v : r.m) v = next();
    r.V = next();
    r.J = next();
    r.H = next();
    if (!log.records.empty() && !(r.t > log.records.back().t)) {
      throw LogFormatError("row " + std::to_string(row) + ": time not increasing");
    }
    log.records.push_back(std::move(r));
  }
  if (log.records.empty()) throw LogFormatError("log has no records");
  return log;
}

TrajectoryLog load_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LogFormatError("cannot read " + path);
  return read_trajectory_csv(in);
}

void write_epoch_csv(std::ostream& out, const std::vector<EpochLog>& epochs) {
  out << "k,anchor,J,gossip_rounds\n";
  std::string line;
  for (const EpochLog& e : epochs) {
    line = std::to_string(e.k + 1) + "," + std::to_string(e.anchor + 1) + ",";
    put(line, e.total_cost);
    line += "," + std::to_string(e.gossip.rounds);
    out << line << '\n';
  }
}

nlohmann::json final_configuration_json(const SearchResult& result) {
  const FinalSelection& f = result.final;
  nlohmann::json positions = nlohmann::json::array();
  for (const Vec2& p : f.positions) positions.push_back({p.x(), p.y()});
  return nlohmann::json{{"K_star", result.k_star},
                        {"k", f.k_star_index + 1},
                        {"J", f.stored_cost},
                        {"J_recomputed", f.recomputed_cost},
                        {"phases", f.phases},
                        {"positions", positions}};
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace coverage
