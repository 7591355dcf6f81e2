#pragma once

// Proportional-sharing oracle for flow tracing on acyclic directed flow
// patterns, computed in exact rational arithmetic. Walks the DAG in
// topological order and mixes inflows proportionally, independent of the
// matrix-based production implementation.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace leakage::testsupport {

struct Rational {
    long long num = 0, den = 1;

    Rational() = default;
    Rational(long long n) : num(n), den(1) {}
    Rational(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::runtime_error("rational: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }
    friend Rational operator+(Rational a, Rational b) {
        return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend Rational operator*(Rational a, Rational b) { return Rational(a.num * b.num, a.den * b.den); }
    friend Rational operator/(Rational a, Rational b) { return Rational(a.num * b.den, a.den * b.num); }
    double value() const { return double(num) / double(den); }
    bool zero() const { return num == 0; }
};

struct DagSnapshot {
    int nodes = 0;
    std::vector<long long> injection;    // net p+, integers
    std::vector<long long> withdrawal;   // net p-
    std::vector<long long> self_supply;  // locally produced and consumed
    struct Edge {
        int from, to;
        long long flow;
    };
    std::vector<Edge> edges;  // topologically ordered by construction (from < to)
};

// Random chain-flow snapshot: forward flows along a path graph with random
// self-supply; injections/withdrawals follow from flow conservation.
inline DagSnapshot random_chain_dag(int nodes, std::uint64_t seed) {
    struct Rng {
        std::uint64_t s;
        std::uint64_t next() {
            std::uint64_t z = (s += 0x9e3779b97f4a7c15ull);
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            return z ^ (z >> 31);
        }
    } rng{seed};
    DagSnapshot dag;
    dag.nodes = nodes;
    dag.injection.assign(std::size_t(nodes), 0);
    dag.withdrawal.assign(std::size_t(nodes), 0);
    dag.self_supply.assign(std::size_t(nodes), 0);
    std::vector<long long> flow(std::size_t(nodes > 0 ? nodes - 1 : 0), 0);
    for (auto& f : flow) f = (long long)(rng.next() % 40);
    for (int v = 0; v < nodes; ++v) {
        long long in_flow = v > 0 ? flow[std::size_t(v - 1)] : 0;
        long long out_flow = v < nodes - 1 ? flow[std::size_t(v)] : 0;
        long long balance = out_flow - in_flow;
        if (balance >= 0) dag.injection[std::size_t(v)] = balance;
        else dag.withdrawal[std::size_t(v)] = -balance;
        dag.self_supply[std::size_t(v)] = (long long)(rng.next() % 20);
        if (v < nodes - 1 && flow[std::size_t(v)] != 0)
            dag.edges.push_back({v, v + 1, flow[std::size_t(v)]});
    }
    return dag;
}

// allocation[m][n]: energy attributed from source m to sink n (gross).
inline std::vector<std::vector<Rational>> proportional_sharing(const DagSnapshot& snap) {
    const int n = snap.nodes;
    std::vector<std::vector<Rational>> mix(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
    std::vector<Rational> throughput(static_cast<std::size_t>(n));

    // nodes are numbered topologically (every edge goes low -> high)
    for (int v = 0; v < n; ++v) {
        std::vector<Rational> inflow(static_cast<std::size_t>(n));
        Rational total = Rational(snap.injection[std::size_t(v)]);
        inflow[std::size_t(v)] = total;
        for (const auto& e : snap.edges) {
            if (e.to != v || e.flow == 0) continue;
            for (int m = 0; m < n; ++m) {
                Rational part = mix[std::size_t(e.from)][std::size_t(m)] * Rational(e.flow);
                inflow[std::size_t(m)] = inflow[std::size_t(m)] + part;
            }
            total = total + Rational(e.flow);
        }
        throughput[std::size_t(v)] = total;
        if (!total.zero()) {
            for (int m = 0; m < n; ++m) mix[std::size_t(v)][std::size_t(m)] = inflow[std::size_t(m)] / total;
        }
    }

    std::vector<std::vector<Rational>> alloc(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
    for (int v = 0; v < n; ++v) {
        for (int m = 0; m < n; ++m)
            alloc[std::size_t(m)][std::size_t(v)] =
                mix[std::size_t(v)][std::size_t(m)] * Rational(snap.withdrawal[std::size_t(v)]);
        alloc[std::size_t(v)][std::size_t(v)] =
            alloc[std::size_t(v)][std::size_t(v)] + Rational(snap.self_supply[std::size_t(v)]);
    }
    return alloc;
}

}  // namespace leakage::testsupport
