#pragma once

#define CTETRIS_VERSION "0.1.0"
