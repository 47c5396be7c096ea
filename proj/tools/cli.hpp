#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hamoracle/interrogation.hpp"
#include "hamoracle/report.hpp"

namespace hamoracle::cli {

// Exit codes: 0 all checks pass, 1 a check failed or the run errored,
// 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

// Schedule files: a JSON array of {duration, b[], c[]}, or an object whose
// "controls" member is such an array.
report::Json schedule_to_json(const interrogation::Schedule& s);
interrogation::Schedule schedule_from_json(const report::Json& j);
interrogation::Schedule load_schedule(const std::string& path);

}  // namespace hamoracle::cli
