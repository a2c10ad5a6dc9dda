// Copyright (c) 2026 The tensorc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Expression core: tensors are indexed scalar expressions. Two mutually
// recursive levels — ScalarExpr (scalar formulas over bound index variables)
// and TensorExpr (tensor-producing nodes). Networks are compositions of
// TensorFun / ScalarFun values over these trees.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "tensorc/diag.hpp"
#include "tensorc/shape.hpp"

namespace tensorc {

struct ScalarExpr;
struct TensorExpr;
using SPtr = std::shared_ptr<const ScalarExpr>;
using TPtr = std::shared_ptr<const TensorExpr>;

// ---------------------------------------------------------------------------
// Parameters

enum class InitKind { Xavier, Constant, Gaussian };

struct ParamSpec {
    std::string name;
    InitKind init = InitKind::Xavier;
    double init_value = 0.0;  // Constant
    double sigma = 0.0;       // Gaussian
    double lr_mult = 1.0;
    double decay_mult = 1.0;
    int rank = 0;
};
using ParamPtr = std::shared_ptr<ParamSpec>;

// ---------------------------------------------------------------------------
// Scalar expressions

enum class SKind {
    Const,       // literal value
    NamedConst,  // named scalar knob; |N| cardinalities print as the name
    IndexVar,    // bound index variable
    Elem,        // tensor element: tensor[idx...]
    Add, Mul, Div, Neg, Log, Exp, Max,
    Sum,         // Sum over one bound index
    Dot,         // full contraction of two equal-shaped tensors
};

struct ScalarExpr {
    SKind kind;
    double value = 0.0;        // Const / NamedConst
    std::string name;          // NamedConst display ("|500|", "loss1")
    int ivar = -1;             // IndexVar id; Sum binder id
    TPtr tensor, tensor2;      // Elem ref / Dot operands
    std::vector<SPtr> args;    // operands; Sum body in args[0]; Elem indices
    // Sum range: extent of `range_axis` of `range_of`, resolved by shape
    // inference (and cached there), or a fixed extent when >= 0.
    TPtr range_of;
    int range_axis = -1;
    std::int64_t fixed_range = -1;
};

SPtr s_const(double v);
SPtr s_named(double v, const std::string& name);
SPtr s_card(std::int64_t n);  // prints |n|
SPtr s_ivar(int id);
SPtr s_elem(TPtr t, std::vector<SPtr> indices);
SPtr s_add(SPtr a, SPtr b);
SPtr s_mul(SPtr a, SPtr b);
SPtr s_div(SPtr a, SPtr b);
SPtr s_neg(SPtr a);
SPtr s_log(SPtr a);
SPtr s_exp(SPtr a);
SPtr s_max(SPtr a, SPtr b);
SPtr s_sum(int binder, TPtr range_of, int range_axis, SPtr body);
SPtr s_sum_fixed(int binder, std::int64_t extent, SPtr body);
SPtr s_dot(TPtr a, TPtr b);

// ---------------------------------------------------------------------------
// Tensor expressions

enum class TKind {
    Var,       // bound tensor variable (fresh per composition / abstraction)
    Param,     // trainable parameter
    Input,     // dataset slot ("X" images / "Y" labels)
    Load,      // device load of a batch; optionally wraps labels as indicators
    IndexAbs,  // tensor from a scalar body over bound indices
    RowBcast,  // (i) => B : broadcast a rank-1 tensor over a leading index
    AddT,      // elementwise tensor addition (bias-add pre-vectorization)
    Prim,      // built-in op with bundled gradient rule
    GradPrim,  // backward form of a Prim slot
    Flatten,   // view: collapse axes [axis .. rank-1]
    Reshape,   // view: reinterpret to a fixed shape (gradient of Flatten)
    Concat,    // channel concatenation
    Copy,      // explicit copy feeding an always-in-place op
    Apply,     // unexpanded function application (removed by normalization)
};

enum class PrimOp {
    Convolv, Pooling, ReLU, Softmax, DropoutMask, LRN,
    MatMul, BiasAdd, Eltwise, Log, Recip, Scale,
};

const char* prim_name(PrimOp op);

// Flat hyperparameter record; which fields are meaningful depends on the op.
struct Hyper {
    int k = 0;            // kernel size
    int stride = 1;
    int pad = 0;
    bool max_pool = true; // Pooling flavor
    int rank = 0;         // ReLU/Softmax declared rank
    double rate = 0.0;    // dropout
    int lrn_size = 0;
    double alpha = 0.0, beta = 0.0;  // LRN
    bool transpose_a = false, transpose_b = false;  // MatMul
    double scale = 1.0;   // Scale
    std::int64_t classes = 0;  // Load indicator K
    bool indicator = false;    // Load wraps labels as K-indicator rows

    bool operator==(const Hyper&) const = default;
};

struct TensorFun;
using FunPtr = std::shared_ptr<const TensorFun>;

struct TensorExpr {
    TKind kind;
    int id = -1;          // SSA display number (Xn); -1 on templates and views
    int rank = 0;
    std::string name;     // Var/Input display name
    ParamPtr param;       // Param

    PrimOp prim = PrimOp::Eltwise;
    Hyper hyper;
    std::vector<TPtr> operands;

    // IndexAbs / Eltwise body
    std::vector<int> binders;
    SPtr body;

    // GradPrim: d_<prim>(hyper)(saved...)/d_<slot> applied to upstream.
    // `saved` are real data dependencies; `wrt_display` is print-only.
    int slot = -1;
    std::vector<TPtr> saved;
    TPtr upstream;
    std::string wrt_display;

    // Flatten
    int flat_axis = 1;
    // Reshape target
    Shape reshape_to;

    // Apply
    FunPtr fun;

    std::string display_name() const;
    // Dependency operands for SSA/liveness: operands + saved + upstream.
    std::vector<TPtr> deps() const;
};

// Function from tensor to tensor. Bodies are templates: inner nodes carry
// id = -1 and receive fresh ids when the application is normalized.
struct TensorFun {
    TPtr bound;  // Var node
    TPtr body;
    std::string label;  // for diagnostics
};

// Function from tensor to scalar (loss heads).
struct ScalarFun {
    TPtr bound;
    SPtr body;
};

// ---------------------------------------------------------------------------
// Build context: owns the Xn counter. Fresh variables created by compose()
// and nodes instantiated during normalization draw from the same counter,
// which is what makes SSA names line up with first-use order.

class ExprContext {
public:
    int fresh_id() { return next_id_++; }
    int peek() const { return next_id_; }

private:
    int next_id_ = 0;
};

// Node constructors. Template constructors (t_*) leave id = -1; the
// normalizer assigns ids via ExprContext as applications are expanded.
TPtr t_var(int id, int rank, std::string name = "");
TPtr t_param(ParamPtr p, int rank);
TPtr t_input(std::string name, int rank);
TPtr t_load(TPtr input, int id);
TPtr t_load_indicator(TPtr labels, std::int64_t classes, int id);
TPtr t_index_abs(std::vector<int> binders, SPtr body, int rank, int id);
TPtr t_row_bcast(int binder, TPtr vec, int id);
TPtr t_add(TPtr a, TPtr b, int id);
TPtr t_prim(PrimOp op, Hyper hyper, std::vector<TPtr> operands, int rank, int id);
TPtr t_grad_prim(PrimOp op, Hyper hyper, int slot, std::vector<TPtr> saved,
                 TPtr upstream, int rank, std::string wrt_display, int id);
TPtr t_flatten(TPtr a, int axis);
TPtr t_reshape(TPtr a, Shape to);
TPtr t_concat(std::vector<TPtr> parts, int id);
TPtr t_copy(TPtr a);
TPtr t_apply(FunPtr f, TPtr arg);

// True for node kinds that take an SSA number when instantiated.
bool needs_id(TKind k);
// True for pure view nodes (no storage of their own).
bool is_view(const TensorExpr& t);

// Function composition: returns fn(p) = f(g(p)) with a fresh bound variable
// drawn from ctx. Bodies stay unexpanded (Apply nodes) until normalization.
FunPtr compose(ExprContext& ctx, FunPtr f, FunPtr g);
FunPtr fun_of(TPtr bound, TPtr body, std::string label = "");

// Beta-reduce all Apply nodes, cloning template bodies with fresh ids in
// post-order. Shared arguments stay shared (the result is a DAG).
TPtr normalize(ExprContext& ctx, TPtr e);

// Free parameters of an expression tree in deterministic first-use order.
std::vector<ParamPtr> free_params(const TPtr& root);
std::vector<ParamPtr> free_params_scalar(const SPtr& root);

// Structural equality ignoring node ids (used by composition laws and
// gradient purity checks).
bool struct_equal(const TPtr& a, const TPtr& b);
bool struct_equal_scalar(const SPtr& a, const SPtr& b);

// Post-order over the tensor DAG (each node once).
void postorder(const TPtr& root, const std::function<void(const TPtr&)>& fn);
void postorder_scalar(const SPtr& root, const std::function<void(const TPtr&)>& fn);

}  // namespace tensorc
