# Tests package for segre-instantons
