package main

import "fmt"

func producer(out chan int) {
	for i := 0; i < 3; i++ {
		out <- i
	}
}

func consumer(in chan int, finished chan int) {
	for j := 0; j < 3; j++ {
		item := <-in
		fmt.Println(item)
	}
	finished <- 1
}

func main() {
	queue := make(chan int, 2)
	done := make(chan int)
	go producer(queue)
	go consumer(queue, done)
	<-done
}
