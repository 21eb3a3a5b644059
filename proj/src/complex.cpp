#include "homkit/complex.hpp"

#include <numeric>

namespace hk {

Order default_order(int rank) {
    Order o(rank);
    std::iota(o.begin(), o.end(), 0);
    return o;
}

std::vector<int> order_rank(const Order& order, int n) {
    std::vector<int> rank(n, -1);
    if (static_cast<int>(order.size()) != n) throw std::invalid_argument("order must list every generator once");
    for (int pos = 0; pos < n; ++pos) {
        int s = order[pos];
        if (s < 0 || s >= n || rank[s] >= 0) throw std::invalid_argument("order must list every generator once");
        rank[s] = pos;
    }
    return rank;
}

int sign_count(GenSet I, int s, const std::vector<int>& rank) {
    int n = 0;
    for (int t : I.members())
        if (rank[t] < rank[s]) ++n;
    return n;
}

} // namespace hk
