#pragma once

#include <string>
#include <vector>

#include "symvmf/orient.hpp"

namespace symvmf {

// Rows q1,q2,q3,q4; optional header; '#' comments ignored.
std::vector<UnitQuaternion> load_quaternion_csv(const std::string& path);

void save_quaternion_csv(const std::string& path,
                         const std::vector<UnitQuaternion>& quats);

}  // namespace symvmf
