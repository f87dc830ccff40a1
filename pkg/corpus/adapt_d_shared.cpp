/* A function object */
template<typename T>
struct plus {
  T operator()(T x, T y) { return x + y; }
};
