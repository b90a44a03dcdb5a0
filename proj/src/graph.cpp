#include "rlift/graph.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

#include "rlift/error.hpp"
#include "rlift/io.hpp"
#include "rlift/numeric.hpp"

namespace rlift {

BaseGraph::BaseGraph(int h, std::vector<Edge> edges) : h_(h), d_(0) {
    if (h <= 0) throw Error(ErrorCode::InvalidArgument, "base graph needs at least one vertex");
    matrix_.assign(static_cast<std::size_t>(h) * h, -1);
    for (Edge& e : edges) {
        if (e.u < 0 || e.v < 0 || e.u >= h || e.v >= h)
            throw Error(ErrorCode::VertexOutOfRange, "edge endpoint out of range");
        if (e.u == e.v) throw Error(ErrorCode::SelfLoop, "vertex " + std::to_string(e.u));
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end());
    for (std::size_t k = 1; k < edges.size(); ++k)
        if (edges[k] == edges[k - 1])
            throw Error(ErrorCode::DuplicateEdge,
                        std::to_string(edges[k].u) + "-" + std::to_string(edges[k].v));
    edges_ = std::move(edges);
    adj_.assign(h, {});
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        const Edge& e = edges_[k];
        adj_[e.u].push_back(e.v);
        adj_[e.v].push_back(e.u);
        matrix_[static_cast<std::size_t>(e.u) * h + e.v] = static_cast<int>(k);
        matrix_[static_cast<std::size_t>(e.v) * h + e.u] = static_cast<int>(k);
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
    d_ = static_cast<int>(adj_[0].size());
    for (int i = 0; i < h; ++i)
        if (static_cast<int>(adj_[i].size()) != d_)
            throw Error(ErrorCode::NonRegular, "vertex " + std::to_string(i) + " has degree " +
                                                   std::to_string(adj_[i].size()) + ", vertex 0 has " +
                                                   std::to_string(d_));
    if (d_ < 2) throw Error(ErrorCode::NonRegular, "degree must be at least 2");
}

BaseGraph make_base_graph(int h, const std::vector<std::pair<int, int>>& edges) {
    std::vector<Edge> es;
    es.reserve(edges.size());
    for (auto [u, v] : edges) es.push_back({u, v});
    return BaseGraph(h, std::move(es));
}

BaseGraph complete_graph(int k) {
    std::vector<Edge> es;
    for (int u = 0; u < k; ++u)
        for (int v = u + 1; v < k; ++v) es.push_back({u, v});
    return BaseGraph(k, std::move(es));
}

BaseGraph cycle_power(int h, int k) {
    if (k < 1 || h <= 2 * k) throw Error(ErrorCode::InvalidArgument, "cycle power needs h > 2k >= 2");
    std::vector<Edge> es;
    for (int u = 0; u < h; ++u)
        for (int s = 1; s <= k; ++s) es.push_back({u, (u + s) % h});
    return BaseGraph(h, std::move(es));
}

BaseGraph petersen_graph() {
    std::vector<Edge> es;
    for (int i = 0; i < 5; ++i) {
        es.push_back({i, (i + 1) % 5});          // outer cycle
        es.push_back({5 + i, 5 + (i + 2) % 5});  // inner pentagram
        es.push_back({i, 5 + i});                // spokes
    }
    return BaseGraph(10, std::move(es));
}

BaseGraph named_base_graph(const std::string& name) {
    auto parse_int = [&](const std::string& s) {
        try {
            std::size_t pos = 0;
            int v = std::stoi(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "bad base graph name '" + name + "'");
        }
    };
    if (name == "petersen") return petersen_graph();
    if (name.size() > 1 && (name[0] == 'k' || name[0] == 'K') && name.find(':') == std::string::npos)
        return complete_graph(parse_int(name.substr(1)));
    if (name.rfind("complete:", 0) == 0) return complete_graph(parse_int(name.substr(9)));
    if (name.rfind("cycle-power:", 0) == 0) {
        std::string rest = name.substr(12);
        auto colon = rest.find(':');
        if (colon == std::string::npos) throw Error(ErrorCode::ParseError, "expected cycle-power:h:k");
        return cycle_power(parse_int(rest.substr(0, colon)), parse_int(rest.substr(colon + 1)));
    }
    if (name.rfind("file:", 0) == 0) return read_base_graph_file(name.substr(5));
    throw Error(ErrorCode::ParseError, "unknown base graph '" + name + "'");
}

struct Lift::InverseCache {
    explicit InverseCache(std::size_t m) : flags(new std::once_flag[m]), inv(m) {}
    std::unique_ptr<std::once_flag[]> flags;
    std::vector<std::vector<int>> inv;
};

Lift::Lift(BaseGraph base, int n, std::vector<std::vector<int>> perms)
    : base_(std::move(base)), n_(n), perms_(std::move(perms)) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "fibre size must be positive");
    if (perms_.size() != base_.edges().size())
        throw Error(ErrorCode::DimensionMismatch, "one permutation per base edge required");
    std::vector<char> seen(n);
    for (const auto& p : perms_) {
        if (static_cast<int>(p.size()) != n) throw Error(ErrorCode::DimensionMismatch, "permutation length");
        std::fill(seen.begin(), seen.end(), 0);
        for (int x : p) {
            if (x < 0 || x >= n || seen[x]) throw Error(ErrorCode::InvalidArgument, "not a permutation");
            seen[x] = 1;
        }
    }
    inverse_ = std::make_shared<InverseCache>(perms_.size());
}

Lift Lift::identity(BaseGraph base, int n) {
    std::vector<int> id(std::max(n, 0));
    std::iota(id.begin(), id.end(), 0);
    std::size_t m = base.edges().size();
    return Lift(std::move(base), n, std::vector<std::vector<int>>(m, id));
}

const std::vector<int>& Lift::inverse_perm(int edge) const {
    std::call_once(inverse_->flags[edge], [&] {
        const auto& p = perms_[edge];
        std::vector<int> inv(p.size());
        for (std::size_t j = 0; j < p.size(); ++j) inv[p[j]] = static_cast<int>(j);
        inverse_->inv[edge] = std::move(inv);
    });
    return inverse_->inv[edge];
}

int Lift::neighbour_in(int v, int fibre) const {
    int i = fibre_of(v), j = index_of(v);
    int e = base_.edge_index(i, fibre);
    if (e < 0) throw Error(ErrorCode::FibresNotAdjacent, "fibres are not adjacent in the base graph");
    return i < fibre ? vertex(fibre, perms_[e][j]) : vertex(fibre, inverse_perm(e)[j]);
}

std::vector<int> Lift::neighbours(int v) const {
    std::vector<int> out;
    out.reserve(base_.d());
    for (int f : base_.neighbours(fibre_of(v))) out.push_back(neighbour_in(v, f));
    return out;
}

bool Lift::adjacent(int u, int v) const {
    int fu = fibre_of(u), fv = fibre_of(v);
    return base_.adjacent(fu, fv) && neighbour_in(u, fv) == v;
}

LiftVector::LiftVector(int n, int h) : n_(n), h_(h), values_(static_cast<std::size_t>(n) * h, 0.0) {}

LiftVector::LiftVector(int n, int h, std::vector<double> entries) : n_(n), h_(h), values_(std::move(entries)) {
    if (values_.size() != static_cast<std::size_t>(n) * h)
        throw Error(ErrorCode::DimensionMismatch, "vector length is not n*h");
}

void LiftVector::refresh() const {
    if (valid_) return;
    sums_.assign(h_, 0.0);
    CompensatedSum nrm;
    for (int i = 0; i < h_; ++i) {
        CompensatedSum s;
        for (int j = 0; j < n_; ++j) {
            double x = values_[static_cast<std::size_t>(i) * n_ + j];
            s.add(x);
            nrm.add(x * x);
        }
        sums_[i] = s.value();
    }
    norm2_ = nrm.value();
    valid_ = true;
}

double LiftVector::norm2() const {
    refresh();
    return norm2_;
}

double LiftVector::fibre_sum(int fibre) const {
    refresh();
    return sums_[fibre];
}

const std::vector<double>& LiftVector::fibre_sums() const {
    refresh();
    return sums_;
}

bool LiftVector::balanced(double rel_tol) const {
    refresh();
    double bound = rel_tol * std::sqrt(norm2_);
    for (double s : sums_)
        if (std::fabs(s) > bound) return false;
    return true;
}

bool LiftVector::is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](double x) { return x == 0.0; });
}

void LiftVector::make_balanced() {
    refresh();
    for (int i = 0; i < h_; ++i) {
        double mean = sums_[i] / n_;
        for (int j = 0; j < n_; ++j) values_[static_cast<std::size_t>(i) * n_ + j] -= mean;
    }
    valid_ = false;
}

static void check_same(const LiftVector& x, const LiftVector& y) {
    if (x.n() != y.n() || x.h() != y.h()) throw Error(ErrorCode::DimensionMismatch, "vectors differ in shape");
}

double dot(const LiftVector& x, const LiftVector& y) {
    check_same(x, y);
    return compensated_dot(x.values(), y.values());
}

LiftVector operator+(const LiftVector& x, const LiftVector& y) {
    check_same(x, y);
    std::vector<double> v(x.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = x[k] + y[k];
    return LiftVector(x.n(), x.h(), std::move(v));
}

LiftVector operator-(const LiftVector& x, const LiftVector& y) {
    check_same(x, y);
    std::vector<double> v(x.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = x[k] - y[k];
    return LiftVector(x.n(), x.h(), std::move(v));
}

LiftVector operator*(double a, const LiftVector& x) {
    std::vector<double> v(x.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = a * x[k];
    return LiftVector(x.n(), x.h(), std::move(v));
}

static void check_dim(const Lift& lift, std::size_t len) {
    if (len != lift.size()) throw Error(ErrorCode::DimensionMismatch, "vector length does not match the lift");
}

void apply_M_into(const Lift& lift, std::span<const double> x, std::span<double> out) {
    check_dim(lift, x.size());
    check_dim(lift, out.size());
    std::fill(out.begin(), out.end(), 0.0);
    const int n = lift.n();
    const auto& edges = lift.base().edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const int* p = lift.perm(static_cast<int>(e)).data();
        const std::size_t ou = static_cast<std::size_t>(edges[e].u) * n;
        const std::size_t ov = static_cast<std::size_t>(edges[e].v) * n;
        for (int j = 0; j < n; ++j) {
            out[ou + j] += x[ov + p[j]];
            out[ov + p[j]] += x[ou + j];
        }
    }
}

static std::vector<double> fibre_sums_of(const Lift& lift, std::span<const double> x) {
    const int n = lift.n(), h = lift.h();
    std::vector<double> s(h);
    for (int i = 0; i < h; ++i) {
        CompensatedSum acc;
        for (int j = 0; j < n; ++j) acc.add(x[static_cast<std::size_t>(i) * n + j]);
        s[i] = acc.value();
    }
    return s;
}

void apply_N_into(const Lift& lift, std::span<const double> x, std::span<double> out) {
    apply_M_into(lift, x, out);
    const int n = lift.n();
    std::vector<double> s = fibre_sums_of(lift, x);
    for (int i = 0; i < lift.h(); ++i) {
        double m = 0.0;
        for (int k : lift.base().neighbours(i)) m += s[k];
        m /= n;
        for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(i) * n + j] -= m;
    }
}

LiftVector apply_M(const Lift& lift, const LiftVector& x) {
    LiftVector out(lift.n(), lift.h());
    apply_M_into(lift, x.values(), out.mutable_values());
    return out;
}

LiftVector apply_Mbar(const Lift& lift, const LiftVector& x) {
    check_dim(lift, x.size());
    const int n = lift.n();
    LiftVector out(n, lift.h());
    auto o = out.mutable_values();
    const auto& s = x.fibre_sums();
    for (int i = 0; i < lift.h(); ++i) {
        double m = 0.0;
        for (int k : lift.base().neighbours(i)) m += s[k];
        m /= n;
        for (int j = 0; j < n; ++j) o[static_cast<std::size_t>(i) * n + j] = m;
    }
    return out;
}

LiftVector apply_N(const Lift& lift, const LiftVector& x) {
    LiftVector out(lift.n(), lift.h());
    apply_N_into(lift, x.values(), out.mutable_values());
    return out;
}

LiftVector lifted_eigenvector(const Lift& lift, const std::vector<double>& base_vec) {
    if (static_cast<int>(base_vec.size()) != lift.h())
        throw Error(ErrorCode::DimensionMismatch, "base vector must have length h");
    LiftVector y(lift.n(), lift.h());
    auto v = y.mutable_values();
    for (int i = 0; i < lift.h(); ++i)
        for (int j = 0; j < lift.n(); ++j) v[static_cast<std::size_t>(i) * lift.n() + j] = base_vec[i];
    return y;
}

}  // namespace rlift
