#ifndef DAO_NEIGHBORS_HPP
#define DAO_NEIGHBORS_HPP

#include "dao/dataset.hpp"
#include "dao/parallel.hpp"
#include "dao/types.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numeric>
#include <queue>
#include <string>
#include <utility>
#include <vector>

namespace dao {

// Sorted k-nearest-neighbor lists for every point, self excluded. Row i holds
// the kmax nearest points ordered by (distance, index).
template <typename Scalar>
class BasicNeighborGraph {
public:
    using DistanceMatrix = PointMatrix<Scalar>;

    static constexpr const char* kTieRule = "distance-then-ascending-index";

    BasicNeighborGraph(IndexMatrix indices, DistanceMatrix distances)
        : indices_(std::move(indices)), distances_(std::move(distances)) {
        if (indices_.rows() != distances_.rows() || indices_.cols() != distances_.cols()) {
            throw std::invalid_argument("neighbor index and distance blocks differ in shape");
        }
        if (distances_.cols() < 1) {
            throw std::invalid_argument("neighbor graph needs kmax >= 1");
        }
    }

    Index size() const { return indices_.rows(); }
    Index kmax() const { return indices_.cols(); }
    const IndexMatrix& indices() const { return indices_; }
    const DistanceMatrix& distances() const { return distances_; }
    std::string tie_rule() const { return kTieRule; }

    // Distance from point i to its k-th nearest neighbor (1-based k).
    Scalar kdist(Index i, Index k) const {
        check_k(k);
        return distances_(i, k - 1);
    }

    // All k-NN distances at neighborhood size k.
    auto kdists(Index k) const {
        check_k(k);
        return distances_.col(k - 1);
    }

    void check_k(Index k) const {
        if (k < 1 || k > kmax()) {
            throw std::out_of_range("k = " + std::to_string(k) + " outside [1, " +
                                    std::to_string(kmax()) + "]");
        }
    }

    friend bool operator==(const BasicNeighborGraph& a, const BasicNeighborGraph& b) {
        return a.indices_ == b.indices_ && a.distances_ == b.distances_;
    }

private:
    IndexMatrix indices_;
    DistanceMatrix distances_;
};

using NeighborGraph = BasicNeighborGraph<double>;

enum class NeighborMethod { Brute, KdTree };

// Median-split trees lose to brute force once the dimension is moderate.
inline NeighborMethod recommended_method(Index dim) {
    return dim <= 12 ? NeighborMethod::KdTree : NeighborMethod::Brute;
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar euclidean(const Eigen::MatrixBase<DerivedA>& a,
                                    const Eigen::MatrixBase<DerivedB>& b) {
    using Scalar = typename DerivedA::Scalar;
    Scalar sum = 0;
    for (Index c = 0; c < a.size(); ++c) {
        const Scalar diff = a(c) - b(c);
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

namespace detail {

template <typename Scalar>
struct Candidate {
    Scalar dist;
    std::uint32_t index;
    friend bool operator<(const Candidate& a, const Candidate& b) {
        return a.dist < b.dist || (a.dist == b.dist && a.index < b.index);
    }
};

template <typename Scalar>
void brute_row(const PointMatrix<Scalar>& points, Index i, Index kmax,
               std::vector<Candidate<Scalar>>& scratch, IndexMatrix& indices,
               PointMatrix<Scalar>& distances) {
    scratch.clear();
    for (Index j = 0; j < points.rows(); ++j) {
        if (j != i) {
            scratch.push_back({euclidean(points.row(i), points.row(j)), static_cast<std::uint32_t>(j)});
        }
    }
    const auto kth = scratch.begin() + kmax;
    std::nth_element(scratch.begin(), kth - 1, scratch.end());
    std::sort(scratch.begin(), kth);
    for (Index c = 0; c < kmax; ++c) {
        indices(i, c) = scratch[static_cast<std::size_t>(c)].index;
        distances(i, c) = scratch[static_cast<std::size_t>(c)].dist;
    }
}

template <typename Scalar>
class KdTree {
public:
    explicit KdTree(const PointMatrix<Scalar>& points, Index leaf_size = 16)
        : points_(points), leaf_size_(leaf_size), order_(static_cast<std::size_t>(points.rows())) {
        std::iota(order_.begin(), order_.end(), 0U);
        nodes_.reserve(2 * order_.size() / static_cast<std::size_t>(leaf_size_) + 2);
        build(0, order_.size());
    }

    void query(Index self, Index k, std::vector<Candidate<Scalar>>& heap) const {
        heap.clear();
        search(0, self, k, heap);
        std::sort_heap(heap.begin(), heap.end());
    }

private:
    struct Node {
        std::size_t begin = 0, end = 0;
        Index split_dim = -1;
        Scalar split_value = 0;
        std::size_t left = 0, right = 0;
        Vector<Scalar> lo, hi;
    };

    std::size_t build(std::size_t begin, std::size_t end) {
        const std::size_t id = nodes_.size();
        Node fresh;
        fresh.begin = begin;
        fresh.end = end;
        nodes_.push_back(std::move(fresh));
        Vector<Scalar> lo = points_.row(order_[begin]).transpose();
        Vector<Scalar> hi = lo;
        for (std::size_t p = begin + 1; p < end; ++p) {
            lo = lo.cwiseMin(points_.row(order_[p]).transpose());
            hi = hi.cwiseMax(points_.row(order_[p]).transpose());
        }
        if (static_cast<Index>(end - begin) > leaf_size_) {
            Index dim;
            const Scalar spread = (hi - lo).maxCoeff(&dim);
            if (spread > 0) {
                const std::size_t mid = begin + (end - begin) / 2;
                std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                                 order_.begin() + static_cast<std::ptrdiff_t>(mid),
                                 order_.begin() + static_cast<std::ptrdiff_t>(end),
                                 [&](std::uint32_t a, std::uint32_t b) {
                                     return points_(a, dim) < points_(b, dim);
                                 });
                nodes_[id].split_dim = dim;
                nodes_[id].split_value = points_(order_[mid], dim);
                const std::size_t left = build(begin, mid);
                const std::size_t right = build(mid, end);
                nodes_[id].left = left;
                nodes_[id].right = right;
            }
        }
        nodes_[id].lo = std::move(lo);
        nodes_[id].hi = std::move(hi);
        return id;
    }

    Scalar box_distance(const Node& node, Index q) const {
        Scalar sum = 0;
        for (Index c = 0; c < points_.cols(); ++c) {
            const Scalar x = points_(q, c);
            Scalar gap = 0;
            if (x < node.lo(c)) {
                gap = node.lo(c) - x;
            } else if (x > node.hi(c)) {
                gap = x - node.hi(c);
            }
            sum += gap * gap;
        }
        return std::sqrt(sum);
    }

    void search(std::size_t id, Index q, Index k, std::vector<Candidate<Scalar>>& heap) const {
        const Node& node = nodes_[id];
        if (static_cast<Index>(heap.size()) == k) {
            // Slack keeps rounding in the bound from pruning an exact tie.
            const Scalar bound = box_distance(node, q);
            if (bound > heap.front().dist * (1 + 16 * std::numeric_limits<Scalar>::epsilon())) {
                return;
            }
        }
        if (node.split_dim < 0) {
            for (std::size_t p = node.begin; p < node.end; ++p) {
                const std::uint32_t j = order_[p];
                if (static_cast<Index>(j) == q) {
                    continue;
                }
                const Candidate<Scalar> c{euclidean(points_.row(q), points_.row(j)), j};
                if (static_cast<Index>(heap.size()) < k) {
                    heap.push_back(c);
                    std::push_heap(heap.begin(), heap.end());
                } else if (c < heap.front()) {
                    std::pop_heap(heap.begin(), heap.end());
                    heap.back() = c;
                    std::push_heap(heap.begin(), heap.end());
                }
            }
            return;
        }
        const bool go_left = points_(q, node.split_dim) < node.split_value;
        search(go_left ? node.left : node.right, q, k, heap);
        search(go_left ? node.right : node.left, q, k, heap);
    }

    const PointMatrix<Scalar>& points_;
    Index leaf_size_;
    std::vector<std::uint32_t> order_;
    std::vector<Node> nodes_;
};

} // namespace detail

// Exact kNN for all points. Both methods yield identical graphs.
template <typename Scalar>
BasicNeighborGraph<Scalar> build_neighbor_graph(const PointMatrix<Scalar>& points, Index kmax,
                                                NeighborMethod method) {
    const Index n = points.rows();
    if (kmax < 1 || kmax > n - 1) {
        throw std::out_of_range("kmax = " + std::to_string(kmax) + " outside [1, " +
                                std::to_string(n - 1) + "]");
    }
    IndexMatrix indices(n, kmax);
    PointMatrix<Scalar> distances(n, kmax);
    if (method == NeighborMethod::Brute) {
        parallel_for(0, n, [&](Index i) {
            thread_local std::vector<detail::Candidate<Scalar>> scratch;
            detail::brute_row(points, i, kmax, scratch, indices, distances);
        });
    } else {
        const detail::KdTree<Scalar> tree(points);
        parallel_for(0, n, [&](Index i) {
            thread_local std::vector<detail::Candidate<Scalar>> heap;
            tree.query(i, kmax, heap);
            for (Index c = 0; c < kmax; ++c) {
                indices(i, c) = heap[static_cast<std::size_t>(c)].index;
                distances(i, c) = heap[static_cast<std::size_t>(c)].dist;
            }
        });
    }
    return BasicNeighborGraph<Scalar>(std::move(indices), std::move(distances));
}

inline NeighborGraph build_neighbor_graph(const Dataset& dataset, Index kmax, NeighborMethod method) {
    return build_neighbor_graph(dataset.points(), kmax, method);
}

inline NeighborGraph build_neighbor_graph(const Dataset& dataset, Index kmax) {
    return build_neighbor_graph(dataset.points(), kmax, recommended_method(dataset.dim()));
}

// Binary cache: little-endian u64 n, u64 kmax, then n*kmax u32 indices and
// n*kmax binary64 distances, both row-major.
void write_graph(const NeighborGraph& graph, const std::filesystem::path& path);
NeighborGraph read_graph(const std::filesystem::path& path);

std::filesystem::path graph_cache_path(const std::filesystem::path& dir, const Dataset& dataset,
                                       Index kmax, DistanceKind metric = DistanceKind::Euclidean);

// Loads the cached graph for (dataset, kmax) or builds and stores it.
NeighborGraph cached_neighbor_graph(const Dataset& dataset, Index kmax,
                                    const std::filesystem::path& cache_dir);

} // namespace dao

#endif // DAO_NEIGHBORS_HPP
