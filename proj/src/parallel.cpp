#include "exciton/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace exciton
{

std::size_t thread_count()
{
  if (const char *env = std::getenv("EXCITON_INDEX_THREADS"))
  {
    try
    {
      const long v = std::stol(env);
      if (v > 0)
      {
        return static_cast<std::size_t>(v);
      }
    }
    catch (const std::exception &)
    {
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body)
{
  const std::size_t workers = std::min(thread_count(), count);
  if (workers <= 1)
  {
    for (std::size_t i = 0; i < count; ++i)
    {
      body(i);
    }
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w)
  {
    const std::size_t first = w * chunk;
    const std::size_t last = std::min(count, first + chunk);
    pool.emplace_back([&, first, last] {
      try
      {
        for (std::size_t i = first; i < last; ++i)
        {
          body(i);
        }
      }
      catch (...)
      {
        std::lock_guard lock(failure_mutex);
        if (!failure)
        {
          failure = std::current_exception();
        }
      }
    });
  }
  for (auto &t : pool)
  {
    t.join();
  }
  if (failure)
  {
    std::rethrow_exception(failure);
  }
}

}  // namespace exciton
