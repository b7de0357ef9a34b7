#include "ogeo/models.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <mutex>
#include <thread>

namespace ogeo {

Structure Structure::make(int n) {
    if (n < 1) throw std::invalid_argument("structure size must be at least 1");
    Structure s;
    s.n = n;
    s.undir.assign(static_cast<std::size_t>(n * n), 0);
    s.rev.assign(static_cast<std::size_t>(n), 0);
    return s;
}

std::vector<std::pair<int, int>> Structure::undir_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (u(a, b)) out.emplace_back(a, b);
    return out;
}

CompiledFormula::CompiledFormula(const Formula& f, const std::vector<std::string>& free_order) {
    std::map<std::string, int> env;
    for (const auto& v : free_order) {
        env[v] = static_cast<int>(slots_++);
    }
    for (const auto& v : free_vars(f))
        if (!env.count(v)) throw UnassignedVariable(v);
    root_ = compile(f, env);
}

int CompiledFormula::compile_term(const Term& t, const std::map<std::string, int>& env) {
    if (t.is_var()) {
        auto it = env.find(t.name());
        if (it == env.end()) throw UnassignedVariable(t.name());
        terms_.push_back({it->second, -1});
    } else {
        if (t.name() != "rev" || t.args().size() != 1)
            throw std::invalid_argument("models interpret only rev/1, found " + t.name());
        int inner = compile_term(t.args()[0], env);
        terms_.push_back({-1, inner});
    }
    return static_cast<int>(terms_.size() - 1);
}

int CompiledFormula::compile(const Formula& f, std::map<std::string, int>& env) {
    Node n{f.kind()};
    switch (f.kind()) {
        case Formula::Kind::Atom:
            if (f.pred() != "UNDIR" || f.args().size() != 2)
                throw std::invalid_argument("models interpret only UNDIR/2, found " + f.pred() +
                                            " (expand definitions first)");
            n.a = compile_term(f.args()[0], env);
            n.b = compile_term(f.args()[1], env);
            break;
        case Formula::Kind::Not:
            n.a = compile(f.body(), env);
            break;
        case Formula::Kind::Forall:
        case Formula::Kind::Exists: {
            n.slot = static_cast<int>(slots_++);
            auto prev = env.find(f.var());
            std::optional<int> saved;
            if (prev != env.end()) saved = prev->second;
            env[f.var()] = n.slot;
            n.a = compile(f.body(), env);
            if (saved)
                env[f.var()] = *saved;
            else
                env.erase(f.var());
            break;
        }
        default:
            n.a = compile(f.lhs(), env);
            n.b = compile(f.rhs(), env);
    }
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size() - 1);
}

int CompiledFormula::term_value(const Structure& s, int t, const int* env) const {
    const TermNode& tn = terms_[static_cast<std::size_t>(t)];
    if (tn.slot >= 0) return env[tn.slot];
    return s.rev[static_cast<std::size_t>(term_value(s, tn.inner, env))];
}

bool CompiledFormula::run(const Structure& s, int node, int* env) const {
    const Node& n = nodes_[static_cast<std::size_t>(node)];
    switch (n.kind) {
        case Formula::Kind::Atom:
            return s.u(term_value(s, n.a, env), term_value(s, n.b, env));
        case Formula::Kind::Not:
            return !run(s, n.a, env);
        case Formula::Kind::And:
            return run(s, n.a, env) && run(s, n.b, env);
        case Formula::Kind::Or:
            return run(s, n.a, env) || run(s, n.b, env);
        case Formula::Kind::Implies:
            return !run(s, n.a, env) || run(s, n.b, env);
        case Formula::Kind::Forall:
            for (int v = 0; v < s.n; ++v) {
                env[n.slot] = v;
                if (!run(s, n.a, env)) return false;
            }
            return true;
        case Formula::Kind::Exists:
            for (int v = 0; v < s.n; ++v) {
                env[n.slot] = v;
                if (run(s, n.a, env)) return true;
            }
            return false;
    }
    return false;
}

bool CompiledFormula::eval(const Structure& s, const std::vector<int>& free_values) const {
    int local[32];
    std::vector<int> heap;
    int* env = local;
    if (slots_ > 32) {
        heap.resize(slots_);
        env = heap.data();
    }
    for (std::size_t i = 0; i < free_values.size() && i < slots_; ++i) {
        if (free_values[i] < 0 || free_values[i] >= s.n) throw std::out_of_range("assignment outside domain");
        env[i] = free_values[i];
    }
    return run(s, root_, env);
}

bool eval(const Structure& s, const Formula& f, const Assignment& a) {
    std::vector<std::string> order;
    std::vector<int> values;
    for (const auto& v : free_vars(f)) {
        auto it = a.find(v);
        if (it == a.end()) throw UnassignedVariable(v);
        order.push_back(v);
        values.push_back(it->second);
    }
    return CompiledFormula(f, order).eval(s, values);
}

std::uint64_t structure_count(int n) {
    if (n < 1 || n * n >= 63) throw std::invalid_argument("unsupported structure size");
    std::uint64_t c = std::uint64_t{1} << (n * n);
    for (int i = 0; i < n; ++i) {
        if (c > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(n))
            throw std::overflow_error("structure count overflows");
        c *= static_cast<std::uint64_t>(n);
    }
    return c;
}

Structure structure_at(int n, std::uint64_t index) {
    Structure s = Structure::make(n);
    const int cells = n * n;
    std::uint64_t bits = index & ((std::uint64_t{1} << cells) - 1);
    std::uint64_t word = index >> cells;
    for (int k = 0; k < cells; ++k) s.undir[static_cast<std::size_t>(k)] = (bits >> (cells - 1 - k)) & 1U;
    for (int i = n - 1; i >= 0; --i) {
        s.rev[static_cast<std::size_t>(i)] = static_cast<int>(word % static_cast<std::uint64_t>(n));
        word /= static_cast<std::uint64_t>(n);
    }
    return s;
}

std::uint64_t structure_index(const Structure& s) {
    const int cells = s.n * s.n;
    std::uint64_t word = 0;
    for (int r : s.rev) word = word * static_cast<std::uint64_t>(s.n) + static_cast<std::uint64_t>(r);
    std::uint64_t bits = 0;
    for (int k = 0; k < cells; ++k) bits = (bits << 1) | s.undir[static_cast<std::size_t>(k)];
    return (word << cells) | bits;
}

namespace {

// Advances s to the structure with the next index (undir bits are the low digits).
void step(Structure& s) {
    for (int k = s.n * s.n - 1; k >= 0; --k) {
        auto& cell = s.undir[static_cast<std::size_t>(k)];
        if (cell == 0) {
            cell = 1;
            return;
        }
        cell = 0;
    }
    for (int i = s.n - 1; i >= 0; --i) {
        auto& r = s.rev[static_cast<std::size_t>(i)];
        if (++r < s.n) return;
        r = 0;
    }
}

}  // namespace

void enumerate_structures(int n, const std::function<bool(const Structure&)>& visit) {
    const std::uint64_t total = structure_count(n);
    Structure s = Structure::make(n);
    for (std::uint64_t i = 0; i < total; ++i) {
        if (!visit(s)) return;
        step(s);
    }
}

namespace {

struct Query {
    std::vector<CompiledFormula> premises;
    CompiledFormula goal;

    bool counter(const Structure& s) const {
        for (const auto& p : premises)
            if (!p.eval(s)) return false;
        return !goal.eval(s);
    }
};

// Smallest index in [0, total) accepted by `query`, searched in chunks by `jobs` workers.
std::optional<std::uint64_t> scan(int n, const Query& query, int jobs, std::uint64_t& checked) {
    const std::uint64_t total = structure_count(n);
    const std::uint64_t chunk = std::max<std::uint64_t>(4096, total / (static_cast<std::uint64_t>(jobs) * 64 + 1));
    std::atomic<std::uint64_t> next{0};
    std::atomic<std::uint64_t> best{std::numeric_limits<std::uint64_t>::max()};
    std::atomic<std::uint64_t> count{0};

    auto worker = [&] {
        std::uint64_t local = 0;
        for (;;) {
            std::uint64_t start = next.fetch_add(chunk);
            if (start >= total || start > best.load()) break;
            std::uint64_t end = std::min(total, start + chunk);
            Structure s = structure_at(n, start);
            for (std::uint64_t i = start; i < end; ++i) {
                ++local;
                if (query.counter(s)) {
                    std::uint64_t cur = best.load();
                    while (i < cur && !best.compare_exchange_weak(cur, i)) {
                    }
                    break;
                }
                step(s);
            }
        }
        count += local;
    };

    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    checked += count.load();
    std::uint64_t b = best.load();
    if (b == std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
    return b;
}

}  // namespace

std::optional<Countermodel> find_countermodel(const std::vector<Formula>& premises, const Formula& goal,
                                              int max_n, int jobs, ModelSearchStats* stats) {
    auto t0 = std::chrono::steady_clock::now();
    Query q{{}, CompiledFormula(goal)};
    for (const auto& p : premises) q.premises.emplace_back(p);
    std::uint64_t checked = 0;
    std::optional<Countermodel> result;
    for (int n = 1; n <= max_n && !result; ++n) {
        if (auto idx = scan(n, q, std::max(1, jobs), checked)) result = Countermodel{structure_at(n, *idx), *idx};
    }
    if (stats) {
        stats->structures_checked = checked;
        stats->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    return result;
}

std::optional<Countermodel> find_disagreement(const Formula& a, const Formula& b, int max_n) {
    CompiledFormula ca(a), cb(b);
    for (int n = 1; n <= max_n; ++n) {
        std::optional<Countermodel> out;
        std::uint64_t i = 0;
        enumerate_structures(n, [&](const Structure& s) {
            if (ca.eval(s) != cb.eval(s)) {
                out = Countermodel{s, i};
                return false;
            }
            ++i;
            return true;
        });
        if (out) return out;
    }
    return std::nullopt;
}

std::string describe_structure(const Structure& s) {
    std::string out = "size " + std::to_string(s.n) + "\nrev";
    for (int r : s.rev) out += " " + std::to_string(r);
    out += "\nundir";
    auto pairs = s.undir_pairs();
    if (pairs.empty()) out += " (none)";
    for (const auto& [a, b] : pairs) out += " (" + std::to_string(a) + "," + std::to_string(b) + ")";
    return out;
}

}  // namespace ogeo
