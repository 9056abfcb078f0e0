#pragma once

#include "swiptsim/signal.hpp"

#include <functional>
#include <string>

namespace testutil {

// Runs fn and reports the SimError code it threw ("(no throw)" otherwise),
// so tests can assert on the machine-readable error taxonomy.
inline std::string thrown_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const swiptsim::SimError& e) {
    return e.code();
  } catch (...) {
    return "(not a SimError)";
  }
  return "(no throw)";
}

}  // namespace testutil
