#pragma once
#include <cstddef>
#include "local_header.h"

#ifndef BUFFER_SIZE
#define BUFFER_SIZE 256
#endif

#if BUFFER_SIZE > 128 && !defined(SMALL)
static char buffer[BUFFER_SIZE];
#elif defined(SMALL)
static char buffer[16];
#endif

#line 100 "renamed.cpp"
#error_if_not_defined_is_not_a_directive_we_care_about
#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wunused"
#pragma GCC diagnostic pop
