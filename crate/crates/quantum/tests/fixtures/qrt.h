// Test runtime for generated quantum kernels: instruction lists and an
// exact statevector simulator.
#ifndef QRT_H
#define QRT_H

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

namespace qrt {

using cplx = std::complex<double>;

struct Instruction {
  std::string name;
  std::vector<int> bits;
  std::vector<double> params;
  std::vector<int> controls;
  bool dagger = false;
};
using InstPtr = std::shared_ptr<Instruction>;

struct CompositeInstruction {
  std::vector<InstPtr> instructions;
  void addInstruction(InstPtr i) { instructions.push_back(i); }
  void addInstructions(std::vector<InstPtr> is) {
    for (auto &i : is) instructions.push_back(i);
  }
};

struct IRProvider {
  InstPtr createInstruction(const std::string &name, std::vector<int> bits, std::vector<double> params = {}) {
    auto i = std::make_shared<Instruction>();
    i->name = name;
    i->bits = bits;
    i->params = params;
    return i;
  }
};

inline std::shared_ptr<IRProvider> getIRProvider() { return std::make_shared<IRProvider>(); }

[[noreturn]] inline void fail(const std::string &msg) {
  std::fprintf(stderr, "qrt: %s\n", msg.c_str());
  std::abort();
}

struct State {
  int n = 0;
  std::vector<cplx> amp;
  std::vector<int> measured;
};

inline void gate_matrix(const Instruction &in, cplx m[4]) {
  const cplx I(0, 1);
  const double r = 1.0 / std::sqrt(2.0);
  double t = in.params.empty() ? 0.0 : in.params[0];
  const std::string &g = in.name;
  if (g == "X" || g == "CX") {
    m[0] = 0; m[1] = 1; m[2] = 1; m[3] = 0;
  } else if (g == "Y") {
    m[0] = 0; m[1] = -I; m[2] = I; m[3] = 0;
  } else if (g == "Z") {
    m[0] = 1; m[1] = 0; m[2] = 0; m[3] = -1;
  } else if (g == "H") {
    m[0] = r; m[1] = r; m[2] = r; m[3] = -r;
  } else if (g == "S") {
    m[0] = 1; m[1] = 0; m[2] = 0; m[3] = I;
  } else if (g == "T") {
    m[0] = 1; m[1] = 0; m[2] = 0; m[3] = std::exp(I * (M_PI / 4));
  } else if (g == "Rx") {
    m[0] = std::cos(t / 2); m[1] = -I * std::sin(t / 2); m[2] = -I * std::sin(t / 2); m[3] = std::cos(t / 2);
  } else if (g == "Ry") {
    m[0] = std::cos(t / 2); m[1] = -std::sin(t / 2); m[2] = std::sin(t / 2); m[3] = std::cos(t / 2);
  } else if (g == "Rz") {
    m[0] = std::exp(-I * (t / 2)); m[1] = 0; m[2] = 0; m[3] = std::exp(I * (t / 2));
  } else {
    fail("unknown gate " + g);
  }
  if (in.dagger) {
    cplx a = std::conj(m[0]), b = std::conj(m[2]), c = std::conj(m[1]), d = std::conj(m[3]);
    m[0] = a; m[1] = b; m[2] = c; m[3] = d;
  }
}

inline void apply(State &s, const Instruction &in) {
  for (int b : in.bits)
    if (b < 0 || b >= s.n) fail("qubit out of range in " + in.name);
  if (in.name == "Measure") {
    if (!in.controls.empty()) fail("controlled measurement");
    s.measured.push_back(in.bits[0]);
    return;
  }
  std::vector<int> controls = in.controls;
  int target = in.bits[0];
  if (in.name == "CX") {
    controls.push_back(in.bits[0]);
    target = in.bits[1];
  }
  std::size_t cmask = 0;
  for (int c : controls) {
    if (c == target || c < 0 || c >= s.n) fail("bad control for " + in.name);
    cmask |= std::size_t(1) << c;
  }
  cplx m[4];
  gate_matrix(in, m);
  std::size_t tb = std::size_t(1) << target;
  for (std::size_t i = 0; i < s.amp.size(); i++) {
    if ((i & tb) || (i & cmask) != cmask) continue;
    cplx a0 = s.amp[i], a1 = s.amp[i | tb];
    s.amp[i] = m[0] * a0 + m[1] * a1;
    s.amp[i | tb] = m[2] * a0 + m[3] * a1;
  }
}

struct qreg {
  std::shared_ptr<State> state;
  std::shared_ptr<std::map<std::string, int>> cnts = std::make_shared<std::map<std::string, int>>();

  int size() const { return state->n; }
  std::map<std::string, int> counts() const { return *cnts; }
  cplx amplitude(std::size_t i) const { return state->amp[i]; }
  void set_amplitude(std::size_t i, cplx v) { state->amp[i] = v; }
  void print() const {
    for (auto &kv : *cnts) std::printf("%s: %d\n", kv.first.c_str(), kv.second);
  }
};

inline qreg qalloc(int n) {
  if (n < 1 || n > 16) fail("qalloc supports 1..16 qubits");
  qreg q;
  q.state = std::make_shared<State>();
  q.state->n = n;
  q.state->amp.assign(std::size_t(1) << n, cplx(0));
  q.state->amp[0] = 1;
  return q;
}

struct Accelerator {
  std::string name;
  int shots;
  void execute(qreg q, std::shared_ptr<CompositeInstruction> program) {
    State &s = *q.state;
    s.measured.clear();
    for (auto &i : program->instructions) apply(s, *i);
    if (s.measured.empty()) return;
    std::size_t m = s.measured.size();
    std::map<std::string, double> p;
    for (std::size_t k = 0; k < (std::size_t(1) << m); k++) {
      std::string b(m, '0');
      for (std::size_t j = 0; j < m; j++)
        if (k >> j & 1) b[j] = '1';
      p[b] = 0;
    }
    for (std::size_t i = 0; i < s.amp.size(); i++) {
      std::string b(m, '0');
      for (std::size_t j = 0; j < m; j++)
        if (i >> s.measured[j] & 1) b[j] = '1';
      p[b] += std::norm(s.amp[i]);
    }
    q.cnts->clear();
    for (auto &kv : p) (*q.cnts)[kv.first] = (int)std::lround(kv.second * shots);
  }
};

inline std::shared_ptr<Accelerator> getAccelerator(const char *name, int shots) {
  auto a = std::make_shared<Accelerator>();
  a->name = name;
  a->shots = shots;
  return a;
}

template <typename Derived, typename... Args>
class QuantumKernel {
 protected:
  std::tuple<Args...> args_tuple;
  std::shared_ptr<CompositeInstruction> _parent_kernel;
  bool is_callable = true;

 public:
  QuantumKernel(Args... args) : args_tuple(args...), _parent_kernel(std::make_shared<CompositeInstruction>()) {}
  QuantumKernel(std::shared_ptr<CompositeInstruction> parent, Args... args)
      : args_tuple(args...), _parent_kernel(parent), is_callable(false) {}
  virtual ~QuantumKernel() {}

  static void adjoint(std::shared_ptr<CompositeInstruction> parent, Args... args) {
    auto body = std::make_shared<CompositeInstruction>();
    { Derived k(body, args...); }
    for (auto it = body->instructions.rbegin(); it != body->instructions.rend(); ++it) {
      auto inv = std::make_shared<Instruction>(**it);
      if (inv->name == "Measure") fail("adjoint of a measurement");
      if (inv->name == "Rx" || inv->name == "Ry" || inv->name == "Rz") inv->params[0] = -inv->params[0];
      if (inv->name == "S" || inv->name == "T") inv->dagger = !inv->dagger;
      parent->addInstruction(inv);
    }
  }

  static void ctrl(std::shared_ptr<CompositeInstruction> parent, int control, Args... args) {
    auto body = std::make_shared<CompositeInstruction>();
    { Derived k(body, args...); }
    for (auto &i : body->instructions) {
      auto c = std::make_shared<Instruction>(*i);
      for (int b : c->bits)
        if (b == control) fail("control collides with an operand");
      c->controls.push_back(control);
      parent->addInstruction(c);
    }
  }
};

}  // namespace qrt

using qrt::qalloc;
using qrt::qreg;

#endif
