#include "alphahash/util.hpp"

#include <pthread.h>

#include <cstdio>
#include <exception>
#include <stdexcept>
#include <system_error>

namespace alphahash {

namespace {

struct StackCall {
  const std::function<void()>* fn;
  std::exception_ptr error;
};

void* stack_call_entry(void* arg) {
  auto* call = static_cast<StackCall*>(arg);
  try {
    (*call->fn)();
  } catch (...) {
    call->error = std::current_exception();
  }
  return nullptr;
}

}  // namespace

void call_with_stack(std::size_t stack_bytes, const std::function<void()>& fn) {
  pthread_attr_t attr;
  if (pthread_attr_init(&attr) != 0)
    throw std::system_error(errno, std::generic_category(), "pthread_attr_init");
  pthread_attr_setstacksize(&attr, stack_bytes);

  StackCall call{&fn, nullptr};
  pthread_t thread;
  int rc = pthread_create(&thread, &attr, stack_call_entry, &call);
  pthread_attr_destroy(&attr);
  if (rc != 0)
    throw std::system_error(rc, std::generic_category(), "pthread_create");
  pthread_join(thread, nullptr);
  if (call.error) std::rethrow_exception(call.error);
}

std::string to_hex(std::uint64_t value, int width_bits) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%0*llx", width_bits / 4,
                static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace alphahash
