#include "confluence/execution.hpp"

#include <omp.h>

namespace confluence {

void set_thread_limit(int n)
{
    if (n > 0) omp_set_num_threads(n);
}

int thread_limit()
{
    return omp_get_max_threads();
}

}  // namespace confluence
