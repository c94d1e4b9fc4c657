#include "dao/neighbors.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace dao {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
T to_little(T value) {
    if constexpr (std::endian::native == std::endian::big) {
        unsigned char bytes[sizeof(T)];
        std::memcpy(bytes, &value, sizeof(T));
        std::reverse(bytes, bytes + sizeof(T));
        std::memcpy(&value, bytes, sizeof(T));
    }
    return value;
}

template <typename T>
void put(std::ostream& out, T value) {
    value = to_little(value);
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T value;
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) {
        throw DataError("truncated neighbor cache");
    }
    return to_little(value);
}

} // namespace

void write_graph(const NeighborGraph& graph, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write '" + path.string() + "'");
    }
    put<std::uint64_t>(out, static_cast<std::uint64_t>(graph.size()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(graph.kmax()));
    const auto& idx = graph.indices();
    for (Index i = 0; i < idx.size(); ++i) {
        put<std::uint32_t>(out, idx.data()[i]);
    }
    const auto& dist = graph.distances();
    for (Index i = 0; i < dist.size(); ++i) {
        put<std::uint64_t>(out, std::bit_cast<std::uint64_t>(dist.data()[i]));
    }
}

NeighborGraph read_graph(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "'");
    }
    const auto n = get<std::uint64_t>(in);
    const auto kmax = get<std::uint64_t>(in);
    if (n < 2 || kmax < 1 || kmax >= n || n > (1ULL << 32)) {
        throw DataError("corrupt neighbor cache header in '" + path.string() + "'");
    }
    IndexMatrix idx(static_cast<Index>(n), static_cast<Index>(kmax));
    for (Index i = 0; i < idx.size(); ++i) {
        idx.data()[i] = get<std::uint32_t>(in);
        if (idx.data()[i] >= n) {
            throw DataError("neighbor index out of range in '" + path.string() + "'");
        }
    }
    PointMatrix<double> dist(static_cast<Index>(n), static_cast<Index>(kmax));
    for (Index i = 0; i < dist.size(); ++i) {
        dist.data()[i] = std::bit_cast<double>(get<std::uint64_t>(in));
    }
    return NeighborGraph(std::move(idx), std::move(dist));
}

std::filesystem::path graph_cache_path(const std::filesystem::path& dir, const Dataset& dataset,
                                       Index kmax, DistanceKind metric) {
    std::ostringstream name;
    name << std::hex << std::setw(16) << std::setfill('0') << dataset.content_hash() << std::dec
         << "_k" << kmax << '_' << (metric == DistanceKind::Euclidean ? "euclidean" : "unknown")
         << ".knn";
    return dir / name.str();
}

NeighborGraph cached_neighbor_graph(const Dataset& dataset, Index kmax,
                                    const std::filesystem::path& cache_dir) {
    const auto path = graph_cache_path(cache_dir, dataset, kmax);
    if (std::filesystem::exists(path)) {
        auto graph = read_graph(path);
        if (graph.size() == dataset.size() && graph.kmax() == kmax) {
            return graph;
        }
    }
    auto graph = build_neighbor_graph(dataset, kmax);
    std::filesystem::create_directories(cache_dir);
    write_graph(graph, path);
    return graph;
}

} // namespace dao
