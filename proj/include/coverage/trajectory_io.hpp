#pragma once

// Text serialization of trajectory logs, search epochs and final configurations.

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "coverage/simulate.hpp"

namespace coverage {

class LogFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Header "t,phi_1..N,px_1..N,py_1..N,m_1..N,V,J,H". Phases are unwrapped.
std::string trajectory_header(std::size_t agent_count);

/// One row per record, every value printed with 17 significant digits.
void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log);
std::string trajectory_csv(const TrajectoryLog& log);

/// Inverse of write_trajectory_csv. Only the serialized fields are filled;
/// run complete_records for the rest. Throws LogFormatError.
TrajectoryLog read_trajectory_csv(std::istream& in);
TrajectoryLog load_trajectory_csv(const std::string& path);

/// "k,anchor,J,gossip_rounds" with 1-based k and anchor.
void write_epoch_csv(std::ostream& out, const std::vector<EpochLog>& epochs);

nlohmann::json final_configuration_json(const SearchResult& result);

/// Writes `text` to `path`, throwing std::runtime_error on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace coverage
