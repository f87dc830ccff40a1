/* From-scratch implementation: the component cannot serve this case. */
float sum(float* x, int n)
{
  float s = 0.0f;
  for (int i=0; i < n; ++i)
    s += x[i];
  return s;
}
