#pragma once

#include <optional>
#include <string>
#include <variant>

#include "shapes/eval.hpp"
#include "shapes/heap.hpp"
#include "shapes/static_checker.hpp"

namespace shapes {

// Types with pool parameters resolved to runtime pool addresses.
struct RtClass {
  std::string class_name;
  std::vector<PoolAddr> params;
};
struct RtPool {
  std::string layout_name;
  std::vector<PoolAddr> params;
};
struct RtBound {
  std::string class_name;
  std::vector<PoolAddr> params;
};

// A static type with its pool variables read out of a frame. Throws
// StuckError if a named pool variable is missing from the frame.
RtClass resolve_type(const ClassType& t, const Frame& frame);

// --- weak agreement: a value / pool address against a runtime type ---

// Null agrees with any class type. An object address agrees with C<π̄> when
// its cell carries exactly that class and those parameters and π̄ starts with
// `none`; a pooled location agrees when π̄ starts with its own pool, whose
// layout is over C with exactly those parameters.
bool weak_agree(const CheckedProgram& prog, const Heap& heap, const Value& v, const RtClass& rt);
// `none` agrees with any bound; a pool must match class and parameters.
bool weak_agree(const CheckedProgram& prog, const Heap& heap, const PoolAddr& p,
                const RtBound& rt);
// A pool variable declared with a layout must hold exactly such a pool.
bool weak_agree(const CheckedProgram& prog, const Heap& heap, const PoolAddr& p,
                const RtPool& rt);

// --- strong agreement: a heap cell against its own recorded type ---

// Structure (arity, field/cluster counts, self-reference of the first pool
// parameter) plus weak agreement of every stored value with its declared,
// parameter-resolved field type.
std::optional<std::string> object_violation(const CheckedProgram& prog, const Heap& heap,
                                            ObjectAddr addr);
std::optional<std::string> pool_violation(const CheckedProgram& prog, const Heap& heap,
                                          PoolId id);

// Every cell agrees with its own recorded type. Returns a description of the
// first violation, in cell order; nullopt when the heap is well-formed.
std::optional<std::string> heap_violation(const CheckedProgram& prog, const Heap& heap);
inline bool wf_heap(const CheckedProgram& prog, const Heap& heap) {
  return !heap_violation(prog, heap);
}

// The frame binds exactly the context's names, and every binding weakly
// agrees with its declared type resolved through the frame itself.
std::optional<std::string> frame_violation(const CheckedProgram& prog, const TypingContext& ctx,
                                           const Heap& heap, const Frame& frame);
inline bool wf_frame(const CheckedProgram& prog, const TypingContext& ctx, const Heap& heap,
                     const Frame& frame) {
  return !frame_violation(prog, ctx, heap, frame);
}

// Graph isomorphism from one root value to another, possibly across heaps
// built by different layout variants of the same program. Objects correspond
// one-to-one (pool membership and ghost parameters are ignored), classes
// match, and corresponding fields lead to corresponding objects.
bool heap_iso(const CheckedProgram& prog_a, const Heap& heap_a, const Value& root_a,
              const CheckedProgram& prog_b, const Heap& heap_b, const Value& root_b);

// Raised by InvariantObserver; carries the violation description.
struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// After every evaluation step: whole-heap well-formedness, current-frame
// well-formedness, and agreement of the step's value with the expression's
// static type resolved through the frame. This is the dynamic counterpart of
// type preservation — any violation means the implementation (or the theory)
// is wrong, so it throws rather than returns.
class InvariantObserver : public EvalObserver {
 public:
  explicit InvariantObserver(const CheckedProgram& prog) : prog_(prog) {}
  void on_result(const Expr& expr, EvalRule rule, const Value& v, const Heap& heap,
                 const Frame& frame, const TypingContext* ctx) override;
  size_t checks_run() const { return checks_; }

 private:
  const CheckedProgram& prog_;
  size_t checks_ = 0;
};

}  // namespace shapes
