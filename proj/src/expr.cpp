// Copyright (c) 2026 The tensorc Authors
// SPDX-License-Identifier: Apache-2.0

#include "tensorc/expr.hpp"

#include <algorithm>
#include <unordered_set>

namespace tensorc {

const char* err_kind_name(ErrKind k) {
    switch (k) {
        case ErrKind::SyntaxError: return "SyntaxError";
        case ErrKind::DuplicateName: return "DuplicateName";
        case ErrKind::UnknownLayerKind: return "UnknownLayerKind";
        case ErrKind::UnboundName: return "UnboundName";
        case ErrKind::ArityError: return "ArityError";
        case ErrKind::ShapeMismatch: return "ShapeMismatch";
        case ErrKind::NonPositiveExtent: return "NonPositiveExtent";
        case ErrKind::NotDifferentiable: return "NotDifferentiable";
        case ErrKind::InvalidSlot: return "InvalidSlot";
        case ErrKind::CycleDetected: return "CycleDetected";
        case ErrKind::PassBudgetExceeded: return "PassBudgetExceeded";
        case ErrKind::Internal: return "Internal";
    }
    return "Error";
}

const char* prim_name(PrimOp op) {
    switch (op) {
        case PrimOp::Convolv: return "Convolv";
        case PrimOp::Pooling: return "Pooling";
        case PrimOp::ReLU: return "ReLU";
        case PrimOp::Softmax: return "Softmax";
        case PrimOp::DropoutMask: return "DropoutMask";
        case PrimOp::LRN: return "LRN";
        case PrimOp::MatMul: return "MatMul";
        case PrimOp::BiasAdd: return "BiasAdd";
        case PrimOp::Eltwise: return "Eltwise";
        case PrimOp::Log: return "Log";
        case PrimOp::Recip: return "Recip";
        case PrimOp::Scale: return "Scale";
    }
    return "?";
}

// --------------------------------------------------------------------------
// Scalar constructors

static SPtr mk_s(SKind k) {
    auto e = std::make_shared<ScalarExpr>();
    e->kind = k;
    return e;
}

SPtr s_const(double v) {
    auto e = std::make_shared<ScalarExpr>();
    e->kind = SKind::Const;
    e->value = v;
    return e;
}

SPtr s_named(double v, const std::string& name) {
    auto e = std::make_shared<ScalarExpr>();
    e->kind = SKind::NamedConst;
    e->value = v;
    e->name = name;
    return e;
}

SPtr s_card(std::int64_t n) {
    return s_named(static_cast<double>(n), "|" + std::to_string(n) + "|");
}

SPtr s_ivar(int id) {
    auto e = std::make_shared<ScalarExpr>();
    e->kind = SKind::IndexVar;
    e->ivar = id;
    return e;
}

SPtr s_elem(TPtr t, std::vector<SPtr> indices) {
    auto e = std::make_shared<ScalarExpr>();
    e->kind = SKind::Elem;
    e->tensor = std::move(t);
    e->args = std::move(indices);
    return e;
}

static SPtr s_bin(SKind k, SPtr a, SPtr b) {
    auto e = std::make_shared<ScalarExpr>();
    e->kind = k;
    e->args = {std::move(a), std::move(b)};
    return e;
}

static SPtr s_un(SKind k, SPtr a) {
    auto e = std::make_shared<ScalarExpr>();
    e->kind = k;
    e->args = {std::move(a)};
    return e;
}

SPtr s_add(SPtr a, SPtr b) { return s_bin(SKind::Add, std::move(a), std::move(b)); }
SPtr s_mul(SPtr a, SPtr b) { return s_bin(SKind::Mul, std::move(a), std::move(b)); }
SPtr s_div(SPtr a, SPtr b) { return s_bin(SKind::Div, std::move(a), std::move(b)); }
SPtr s_neg(SPtr a) { return s_un(SKind::Neg, std::move(a)); }
SPtr s_log(SPtr a) { return s_un(SKind::Log, std::move(a)); }
SPtr s_exp(SPtr a) { return s_un(SKind::Exp, std::move(a)); }
SPtr s_max(SPtr a, SPtr b) { return s_bin(SKind::Max, std::move(a), std::move(b)); }

SPtr s_sum(int binder, TPtr range_of, int range_axis, SPtr body) {
    auto e = mk_s(SKind::Sum);
    auto* m = const_cast<ScalarExpr*>(e.get());
    m->ivar = binder;
    m->range_of = std::move(range_of);
    m->range_axis = range_axis;
    m->args = {std::move(body)};
    return e;
}

SPtr s_sum_fixed(int binder, std::int64_t extent, SPtr body) {
    auto e = mk_s(SKind::Sum);
    auto* m = const_cast<ScalarExpr*>(e.get());
    m->ivar = binder;
    m->fixed_range = extent;
    m->args = {std::move(body)};
    return e;
}

SPtr s_dot(TPtr a, TPtr b) {
    auto e = mk_s(SKind::Dot);
    auto* m = const_cast<ScalarExpr*>(e.get());
    m->tensor = std::move(a);
    m->tensor2 = std::move(b);
    return e;
}

// --------------------------------------------------------------------------
// Tensor constructors

bool needs_id(TKind k) {
    switch (k) {
        case TKind::Var:
        case TKind::Load:
        case TKind::IndexAbs:
        case TKind::RowBcast:
        case TKind::AddT:
        case TKind::Prim:
        case TKind::GradPrim:
        case TKind::Concat:
            return true;
        default:
            return false;
    }
}

bool is_view(const TensorExpr& t) {
    return t.kind == TKind::Flatten || t.kind == TKind::Reshape;
}

static std::shared_ptr<TensorExpr> mk_t(TKind k, int rank, int id) {
    auto e = std::make_shared<TensorExpr>();
    e->kind = k;
    e->rank = rank;
    e->id = id;
    return e;
}

TPtr t_var(int id, int rank, std::string name) {
    auto e = mk_t(TKind::Var, rank, id);
    e->name = std::move(name);
    return e;
}

TPtr t_param(ParamPtr p, int rank) {
    auto e = mk_t(TKind::Param, rank, -1);
    e->param = std::move(p);
    return e;
}

TPtr t_input(std::string name, int rank) {
    auto e = mk_t(TKind::Input, rank, -1);
    e->name = std::move(name);
    return e;
}

TPtr t_load(TPtr input, int id) {
    auto e = mk_t(TKind::Load, input->rank, id);
    e->operands = {std::move(input)};
    return e;
}

TPtr t_load_indicator(TPtr labels, std::int64_t classes, int id) {
    auto e = mk_t(TKind::Load, 2, id);
    e->hyper.indicator = true;
    e->hyper.classes = classes;
    e->operands = {std::move(labels)};
    return e;
}

TPtr t_index_abs(std::vector<int> binders, SPtr body, int rank, int id) {
    auto e = mk_t(TKind::IndexAbs, rank, id);
    e->binders = std::move(binders);
    e->body = std::move(body);
    return e;
}

TPtr t_row_bcast(int binder, TPtr vec, int id) {
    auto e = mk_t(TKind::RowBcast, 2, id);
    e->binders = {binder};
    e->operands = {std::move(vec)};
    return e;
}

TPtr t_add(TPtr a, TPtr b, int id) {
    auto e = mk_t(TKind::AddT, a->rank, id);
    e->operands = {std::move(a), std::move(b)};
    return e;
}

TPtr t_prim(PrimOp op, Hyper hyper, std::vector<TPtr> operands, int rank, int id) {
    auto e = mk_t(TKind::Prim, rank, id);
    e->prim = op;
    e->hyper = hyper;
    e->operands = std::move(operands);
    return e;
}

TPtr t_grad_prim(PrimOp op, Hyper hyper, int slot, std::vector<TPtr> saved,
                 TPtr upstream, int rank, std::string wrt_display, int id) {
    auto e = mk_t(TKind::GradPrim, rank, id);
    e->prim = op;
    e->hyper = hyper;
    e->slot = slot;
    e->saved = std::move(saved);
    e->upstream = std::move(upstream);
    e->wrt_display = std::move(wrt_display);
    return e;
}

TPtr t_flatten(TPtr a, int axis) {
    auto e = mk_t(TKind::Flatten, 2, -1);
    e->flat_axis = axis;
    e->operands = {std::move(a)};
    return e;
}

TPtr t_reshape(TPtr a, Shape to) {
    auto e = mk_t(TKind::Reshape, to.rank(), -1);
    e->reshape_to = std::move(to);
    e->operands = {std::move(a)};
    return e;
}

TPtr t_concat(std::vector<TPtr> parts, int id) {
    auto e = mk_t(TKind::Concat, parts.empty() ? 0 : parts[0]->rank, id);
    e->operands = std::move(parts);
    return e;
}

TPtr t_copy(TPtr a) {
    auto e = mk_t(TKind::Copy, a->rank, -1);
    e->operands = {std::move(a)};
    return e;
}

TPtr t_apply(FunPtr f, TPtr arg) {
    auto e = mk_t(TKind::Apply, 0, -1);
    e->fun = std::move(f);
    e->operands = {std::move(arg)};
    return e;
}

std::string TensorExpr::display_name() const {
    switch (kind) {
        case TKind::Param: return param->name;
        case TKind::Input: return name;
        case TKind::Var: return name.empty() ? "X" + std::to_string(id) : name;
        default: return "X" + std::to_string(id);
    }
}

std::vector<TPtr> TensorExpr::deps() const {
    std::vector<TPtr> d = operands;
    d.insert(d.end(), saved.begin(), saved.end());
    if (upstream) d.push_back(upstream);
    return d;
}

// --------------------------------------------------------------------------
// Composition and normalization

FunPtr fun_of(TPtr bound, TPtr body, std::string label) {
    auto f = std::make_shared<TensorFun>();
    f->bound = std::move(bound);
    f->body = std::move(body);
    f->label = std::move(label);
    return f;
}

FunPtr compose(ExprContext& ctx, FunPtr f, FunPtr g) {
    TPtr v = t_var(ctx.fresh_id(), 0);
    TPtr body = t_apply(f, t_apply(g, v));
    return fun_of(v, body, f->label + "." + g->label);
}

namespace {

// Clones a function body, substituting the bound variable and assigning
// fresh ids to template nodes in post-order. Nodes that already carry an id
// (the argument and anything reachable from it) are left shared.
struct Instantiator {
    ExprContext& ctx;
    const TensorExpr* bound;
    TPtr arg;
    std::unordered_map<const TensorExpr*, TPtr> tmemo;
    std::unordered_map<const ScalarExpr*, SPtr> smemo;

    TPtr tensor(const TPtr& t);
    SPtr scalar(const SPtr& s);
};

TPtr Instantiator::tensor(const TPtr& t) {
    if (t.get() == bound) return arg;
    if (t->id >= 0 || t->kind == TKind::Param || t->kind == TKind::Input) return t;
    auto it = tmemo.find(t.get());
    if (it != tmemo.end()) return it->second;

    auto c = std::make_shared<TensorExpr>(*t);
    for (auto& op : c->operands) op = tensor(op);
    for (auto& sv : c->saved) sv = tensor(sv);
    if (c->upstream) c->upstream = tensor(c->upstream);
    if (c->body) c->body = scalar(c->body);
    if (needs_id(c->kind)) c->id = ctx.fresh_id();
    TPtr r = c;
    tmemo[t.get()] = r;
    return r;
}

SPtr Instantiator::scalar(const SPtr& s) {
    auto it = smemo.find(s.get());
    if (it != smemo.end()) return it->second;
    auto c = std::make_shared<ScalarExpr>(*s);
    for (auto& a : c->args) a = scalar(a);
    if (c->tensor) c->tensor = tensor(c->tensor);
    if (c->tensor2) c->tensor2 = tensor(c->tensor2);
    if (c->range_of) c->range_of = tensor(c->range_of);
    SPtr r = c;
    smemo[s.get()] = r;
    return r;
}

struct Normalizer {
    ExprContext& ctx;
    std::unordered_map<const TensorExpr*, TPtr> memo;

    TPtr run(const TPtr& t) {
        auto it = memo.find(t.get());
        if (it != memo.end()) return it->second;
        TPtr r = step(t);
        memo[t.get()] = r;
        return r;
    }

    TPtr step(const TPtr& t) {
        if (t->kind == TKind::Apply) {
            TPtr arg = run(t->operands[0]);
            Instantiator inst{ctx, t->fun->bound.get(), arg, {}, {}};
            TPtr body = inst.tensor(t->fun->body);
            return run(body);  // nested applications inside the template
        }
        bool changed = false;
        auto c = std::make_shared<TensorExpr>(*t);
        for (auto& op : c->operands) {
            TPtr n = run(op);
            if (n != op) { op = n; changed = true; }
        }
        for (auto& sv : c->saved) {
            TPtr n = run(sv);
            if (n != sv) { sv = n; changed = true; }
        }
        if (c->upstream) {
            TPtr n = run(c->upstream);
            if (n != c->upstream) { c->upstream = n; changed = true; }
        }
        return changed ? TPtr(c) : t;
    }
};

}  // namespace

TPtr normalize(ExprContext& ctx, TPtr e) {
    Normalizer n{ctx, {}};
    return n.run(e);
}

// --------------------------------------------------------------------------
// Traversals

void postorder(const TPtr& root, const std::function<void(const TPtr&)>& fn) {
    std::unordered_set<const TensorExpr*> seen;
    std::function<void(const TPtr&)> go = [&](const TPtr& t) {
        if (!t || seen.count(t.get())) return;
        seen.insert(t.get());
        for (const auto& d : t->deps()) go(d);
        if (t->body) {
            std::function<void(const SPtr&)> gs = [&](const SPtr& s) {
                if (!s) return;
                for (const auto& a : s->args) gs(a);
                if (s->tensor) go(s->tensor);
                if (s->tensor2) go(s->tensor2);
                if (s->range_of) go(s->range_of);
            };
            gs(t->body);
        }
        fn(t);
    };
    go(root);
}

void postorder_scalar(const SPtr& root, const std::function<void(const TPtr&)>& fn) {
    std::unordered_set<const TensorExpr*> seen;
    std::function<void(const TPtr&)> got = [&](const TPtr& t) {
        if (!t || seen.count(t.get())) return;
        seen.insert(t.get());
        for (const auto& d : t->deps()) got(d);
        if (t->body) {
            std::function<void(const SPtr&)> gs = [&](const SPtr& s) {
                if (!s) return;
                for (const auto& a : s->args) gs(a);
                if (s->tensor) got(s->tensor);
                if (s->tensor2) got(s->tensor2);
                if (s->range_of) got(s->range_of);
            };
            gs(t->body);
        }
        fn(t);
    };
    std::function<void(const SPtr&)> gos = [&](const SPtr& s) {
        if (!s) return;
        for (const auto& a : s->args) gos(a);
        if (s->tensor) got(s->tensor);
        if (s->tensor2) got(s->tensor2);
        if (s->range_of) got(s->range_of);
    };
    gos(root);
}

std::vector<ParamPtr> free_params(const TPtr& root) {
    std::vector<ParamPtr> out;
    std::unordered_set<const ParamSpec*> seen;
    postorder(root, [&](const TPtr& t) {
        if (t->kind == TKind::Param && !seen.count(t->param.get())) {
            seen.insert(t->param.get());
            out.push_back(t->param);
        }
    });
    return out;
}

std::vector<ParamPtr> free_params_scalar(const SPtr& root) {
    std::vector<ParamPtr> out;
    std::unordered_set<const ParamSpec*> seen;
    postorder_scalar(root, [&](const TPtr& t) {
        if (t->kind == TKind::Param && !seen.count(t->param.get())) {
            seen.insert(t->param.get());
            out.push_back(t->param);
        }
    });
    return out;
}

// --------------------------------------------------------------------------
// Structural equality (ids ignored)

bool struct_equal_scalar(const SPtr& a, const SPtr& b);

bool struct_equal(const TPtr& a, const TPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind || a->rank != b->rank) return false;
    if (a->kind == TKind::Param) return a->param.get() == b->param.get();
    if (a->kind == TKind::Var) return true;  // alpha-equivalence
    if (a->kind == TKind::Input) return a->name == b->name;
    if (a->prim != b->prim || !(a->hyper == b->hyper)) return false;
    if (a->slot != b->slot || a->flat_axis != b->flat_axis) return false;
    if (a->operands.size() != b->operands.size() || a->saved.size() != b->saved.size()) return false;
    for (size_t i = 0; i < a->operands.size(); ++i)
        if (!struct_equal(a->operands[i], b->operands[i])) return false;
    for (size_t i = 0; i < a->saved.size(); ++i)
        if (!struct_equal(a->saved[i], b->saved[i])) return false;
    if (!!a->upstream != !!b->upstream) return false;
    if (a->upstream && !struct_equal(a->upstream, b->upstream)) return false;
    if (!!a->body != !!b->body) return false;
    if (a->body && !struct_equal_scalar(a->body, b->body)) return false;
    return true;
}

bool struct_equal_scalar(const SPtr& a, const SPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    if (a->kind == SKind::Const || a->kind == SKind::NamedConst)
        return a->value == b->value && a->name == b->name;
    if (a->args.size() != b->args.size()) return false;
    for (size_t i = 0; i < a->args.size(); ++i)
        if (!struct_equal_scalar(a->args[i], b->args[i])) return false;
    if (!!a->tensor != !!b->tensor || (a->tensor && !struct_equal(a->tensor, b->tensor))) return false;
    if (!!a->tensor2 != !!b->tensor2 || (a->tensor2 && !struct_equal(a->tensor2, b->tensor2))) return false;
    return true;
}

}  // namespace tensorc
