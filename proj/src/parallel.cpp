#include "viscograd/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace viscograd {

int configured_threads() {
    if (const char* env = std::getenv("VISCOGRAD_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
    }
    return omp_get_max_threads();
}

void apply_thread_limit() { omp_set_num_threads(configured_threads()); }

} // namespace viscograd
