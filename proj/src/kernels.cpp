#include "magweyl/kernels.hpp"

namespace magweyl::kernels {

namespace {

bool detect_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

struct State {
  const Ops* ops;
  std::string name;
};

State& state() {
  static State s = [] {
    if (detect_avx2()) return State{&avx2_ops(), "avx2"};
    return State{&scalar_ops(), "scalar"};
  }();
  return s;
}

}  // namespace

bool avx2_available() { return detect_avx2(); }

const Ops& active() { return *state().ops; }

std::string backend_name() { return state().name; }

bool select_backend(const std::string& name) {
  if (name == "scalar") {
    state() = {&scalar_ops(), "scalar"};
    return true;
  }
  if (name == "avx2") {
    if (!avx2_available()) return false;
    state() = {&avx2_ops(), "avx2"};
    return true;
  }
  if (name == "auto") {
    state() = detect_avx2() ? State{&avx2_ops(), "avx2"} : State{&scalar_ops(), "scalar"};
    return true;
  }
  return false;
}

}  // namespace magweyl::kernels
