#pragma once

#define KINN_VERSION "0.1.0"
