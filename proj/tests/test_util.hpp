#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ltlgame/common.hpp"

namespace ltlgame::testing_util {

inline std::string data_path(const std::string& rel) { return std::string(LTLGAME_DATA_DIR) + "/" + rel; }

inline std::string read_data(const std::string& rel) {
  std::ifstream in(data_path(rel));
  if (!in) throw std::runtime_error("cannot open " + data_path(rel));
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace ltlgame::testing_util
