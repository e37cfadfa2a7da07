#pragma once

#include <cstddef>
#include <exception>

namespace ec {

enum class Exec { serial, parallel };

// Runs body(i) for i in [0, n). In parallel mode the first exception by
// index is rethrown, so both modes fail on the same element.
template <class Body>
void for_each_index(std::size_t n, Exec exec, Body&& body) {
    if (exec == Exec::serial || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr first;
    std::size_t first_i = n;
#pragma omp parallel for schedule(dynamic, 8)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(ec_for_each_index)
            {
                if (static_cast<std::size_t>(i) < first_i) {
                    first_i = static_cast<std::size_t>(i);
                    first = std::current_exception();
                }
            }
        }
    }
    if (first) std::rethrow_exception(first);
}

}  // namespace ec
