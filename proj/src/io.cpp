#include "symvmf/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "symvmf/errors.hpp"

namespace symvmf {

std::vector<UnitQuaternion> load_quaternion_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  std::vector<UnitQuaternion> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    double v[4];
    char comma;
    if (!(ss >> v[0])) {
      if (lineno == 1) continue;  // header row
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected q1,q2,q3,q4");
    }
    for (int i = 1; i < 4; ++i) {
      if (!(ss >> comma >> v[i]) || comma != ',') {
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": expected q1,q2,q3,q4");
      }
    }
    const double n =
        std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
    if (std::abs(n - 1.0) > 1e-6) {
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": row is not a unit quaternion");
    }
    out.emplace_back(v[0], v[1], v[2], v[3]);
  }
  if (out.empty()) throw ParseError(path + ": no quaternion rows");
  return out;
}

void save_quaternion_csv(const std::string& path,
                         const std::vector<UnitQuaternion>& quats) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << "q1,q2,q3,q4\n" << std::setprecision(17);
  for (const auto& q : quats) {
    out << q.q1 << ',' << q.q2 << ',' << q.q3 << ',' << q.q4 << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace symvmf
