#pragma once

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "xfsynth/term.hpp"

namespace xfsynth {

enum class Op { Abs, Add, Sub, Mul, And, Or, Xor, Shl, Ashr, Lshr, Concat, Contains, CharAt, ToLower, ToUpper, Trim };

const char* op_name(Op op);
Op op_from_name(const std::string& s);
int op_arity(Op op);
Dom op_output_domain(Op op, Dom in);
bool op_supported(Op op, Dom in);

// nullopt is the distinguished out-of-range outcome (charAt).
std::optional<Value> concrete_op(const Ctx& c, Dom in, Op op, const Value* args);

// <input, concrete output>; w is the output's index in the witness universe.
struct Example {
  int input = -1;
  Value out;
  int w = -1;
  bool operator==(const Example&) const = default;
};

// The finite view of one synthesis problem: enumerated abstract inputs, their
// concrete members, images under the operation, and interned outputs with
// their concretizations over the witness universe W.
class Problem {
 public:
  Problem(const Ctx& c, Dom dom, Op op, bool bot_strict = true);
  Problem(const Problem&) = delete;
  Problem& operator=(const Problem&) = delete;

  const Ctx& ctx() const { return c_; }
  Dom dom() const { return dom_; }
  Dom out_dom() const { return out_dom_; }
  Op op() const { return op_; }
  int arity() const { return arity_; }
  bool bot_strict() const { return bot_strict_; }

  size_t num_inputs() const { return inputs_.size(); }
  const Env& input(size_t j) const { return inputs_[j]; }
  std::vector<Value> input_args(size_t j) const;
  std::string format_input(size_t j) const;
  int find_input(const std::vector<Value>& args) const;  // -1 if not enumerated
  bool input_has_bot(size_t j) const { return has_bot_[j]; }

  const std::vector<Value>& witnesses() const { return W_; }
  int witness_index(const Value& x) const;
  size_t words() const { return words_; }

  const uint64_t* image_bits(size_t j) const { return &img_bits_[j * words_]; }
  bool image_in_w(size_t j) const { return img_in_w_[j]; }
  bool image_empty(size_t j) const { return img_empty_[j]; }
  const Value& best(size_t j) const { return best_[j]; }

  int intern(const Value& out);
  const Value& output(int id) const { return outs_[id]; }
  size_t num_outputs() const { return outs_.size(); }
  const uint64_t* out_bits(int id);
  bool contains(int id, const Example& e);
  bool contains_w(int id, int w) { return out_bits(id)[w >> 6] >> (w & 63) & 1; }
  bool sound_at(size_t j, int id);
  // gamma(a) within W is a subset of gamma(b) within W
  bool leq_w(int a, int b);

  // Output of a transformer term at input j, with the bottom-strict wrapper.
  int eval_output(const Term& t, size_t j);
  int fixed_bottom() { return intern(bottom(c_, out_dom_)); }

  std::optional<Value> apply(const Value* args) const { return concrete_op(c_, dom_, op_, args); }
  // Visits the members of gamma(input j) in canonical order until fn returns false.
  void members(size_t j, const std::function<bool(const Value* args)>& fn) const;
  // First member whose image escapes gamma(output id): a positive counterexample.
  std::optional<Example> first_uncovered(size_t j, int id);
  Example make_example(size_t j, const Value& out) const;
  std::string format_output(const Value& v) const { return format_value(c_, out_dom_, v); }

 private:
  struct Part {
    std::vector<uint64_t> bits;
    bool in_w = true;
    bool empty = true;
    Value best;
  };
  Part image_of(const std::vector<const std::vector<int>*>& members);
  const std::vector<int>& members_of(const Value& a);

  Ctx c_;
  Dom dom_, out_dom_;
  Op op_;
  int arity_;
  bool bot_strict_;
  std::vector<Value> universe_;  // concrete inputs
  std::vector<Value> abstract_;  // enumerated abstract values
  std::vector<Env> inputs_;
  std::vector<std::vector<int>> input_comp_;  // indices into abstract_
  std::vector<bool> has_bot_;
  std::unordered_map<std::vector<Value>, int, TupleHash> input_index_;
  std::vector<std::vector<int>> members_;  // per abstract_ index
  std::unordered_map<Value, std::vector<int>, ValueHash> atom_members_;

  std::vector<Value> W_;
  std::unordered_map<Value, int, ValueHash> w_index_;
  size_t words_ = 1;

  std::vector<uint64_t> img_bits_;
  std::vector<bool> img_in_w_, img_empty_;
  std::vector<Value> best_;

  std::vector<Value> outs_;
  std::unordered_map<Value, int, ValueHash> out_index_;
  std::vector<std::vector<uint64_t>> out_bits_;
  std::vector<bool> out_bits_ready_;
  EvalCtx ec_;
};

}  // namespace xfsynth
