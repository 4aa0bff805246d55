#ifndef MODCELL_PARALLEL_HPP
#define MODCELL_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <type_traits>
#include <vector>

namespace modcell {

/// Applies fn to every item on up to `workers` threads. Results keep the
/// input order, so output never depends on the worker count.
template <class T, class F>
auto parallel_map(const std::vector<T>& items, F fn, int workers = 1)
    -> std::vector<std::decay_t<std::invoke_result_t<F&, const T&>>> {
    using R = std::decay_t<std::invoke_result_t<F&, const T&>>;
    std::vector<R> out(items.size());
    const int w = std::max(1, std::min<int>(workers, static_cast<int>(items.size())));
    if (w <= 1) {
        for (std::size_t k = 0; k < items.size(); ++k) out[k] = fn(items[k]);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(w);
    std::vector<std::thread> pool;
    for (int id = 0; id < w; ++id)
        pool.emplace_back([&, id] {
            try {
                for (std::size_t k = next++; k < items.size(); k = next++) out[k] = fn(items[k]);
            } catch (...) {
                errors[id] = std::current_exception();
                next = items.size();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace modcell

#endif  // MODCELL_PARALLEL_HPP
